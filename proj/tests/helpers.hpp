#ifndef TIMEBIN_TESTS_HELPERS_HPP
#define TIMEBIN_TESTS_HELPERS_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "timebin/core.hpp"

namespace timebin::testing {

inline const Complex kImag(0.0, 1.0);

// Reference coupler matrix, written independently of the component code:
// B(w) = [[cos w, i sin w], [i sin w, cos w]].
inline Eigen::Matrix2cd coupler_matrix(double w) {
  Eigen::Matrix2cd b;
  b << std::cos(w), kImag * std::sin(w), kImag * std::sin(w), std::cos(w);
  return b;
}

// diag(e^{i theta}, 1) on the upper rail.
inline Eigen::Matrix2cd upper_phase(double theta) {
  Eigen::Matrix2cd p = Eigen::Matrix2cd::Identity();
  p(0, 0) = std::exp(kImag * theta);
  return p;
}

inline bool near(double a, double b, double tol = kTolerance) {
  return std::abs(a - b) <= tol;
}

inline bool near(const Complex& a, const Complex& b, double tol = kTolerance) {
  return std::abs(a - b) <= tol;
}

inline double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Largest entrywise difference after rotating `b` onto `a`'s phase (scale
// is kept; use for equality up to global phase only).
inline double max_diff_up_to_phase(const Eigen::Matrix2cd& a,
                                   const Eigen::Matrix2cd& b) {
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) == 0.0) return max_diff(a, b);
  const Complex rot = (a(r, c) / std::abs(a(r, c))) /
                      (b(r, c) / std::abs(b(r, c)));
  return max_diff(a, b * rot);
}

// Normalized random state over the given modes.
inline PhotonState random_state(const std::vector<Mode>& modes,
                                std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::map<Mode, Complex> amps;
  double norm2 = 0.0;
  for (const Mode& m : modes) {
    const Complex a(normal(rng), normal(rng));
    amps[m] = a;
    norm2 += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& [m, a] : amps) a *= scale;
  return PhotonState(std::move(amps));
}

}  // namespace timebin::testing

#endif
