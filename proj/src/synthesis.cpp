#include "timebin/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "timebin/analysis.hpp"

namespace timebin {

namespace {

using std::numbers::pi;

// Entries below this are treated as exact zeros of the unitary's structure.
constexpr double kDegenerate = 1e-12;

void require_unitary(const Eigen::Matrix2cd& u) {
  const Eigen::Matrix2cd r = u.adjoint() * u - Eigen::Matrix2cd::Identity();
  if (r.cwiseAbs().maxCoeff() > kUnitaryResidualLimit) {
    throw NotUnitary("target matrix is not unitary within 1e-8");
  }
}

void require_timebin_target(const QubitMatrix& target) {
  if (target.tag != BasisTag::timebin) {
    throw InvalidInput("synthesis targets must be given in the timebin basis");
  }
  require_unitary(target.m);
}

}  // namespace

PhaseFactorResult factor_global_phase(const Eigen::Matrix2cd& u) {
  require_unitary(u);
  double gamma;
  if (std::abs(u(1, 1)) < kDegenerate) {
    gamma = std::arg(u(1, 0)) - pi / 2.0;
  } else {
    gamma = std::arg(u(1, 1));
  }
  gamma = wrap_phase(gamma);
  PhaseFactorResult result;
  result.gamma = gamma;
  result.canonical = std::exp(Complex(0.0, -gamma)) * u;
  return result;
}

GateSettings synth_dualrail(const QubitMatrix& target) {
  require_timebin_target(target);
  const auto [gamma, u] = factor_global_phase(target.m);

  GateSettings s;
  s.scheme = Scheme::dualrail;
  s.gamma = gamma;

  const double cos_w = std::clamp(u(1, 1).real(), 0.0, 1.0);
  const double sin_w = std::abs(u(1, 0));
  if (sin_w < kDegenerate) {
    // Bar state: the coupler is off and the only freedom is the upper-rail
    // phase, fixed as theta2.
    s.eta = 0.0;
    s.theta1 = 0.0;
    s.theta2 = wrap_phase(std::arg(u(0, 0)));
  } else if (cos_w < kDegenerate) {
    // Full cross: phase factoring already pinned arg u(1,0) = pi/2.
    s.eta = 1.0;
    s.theta1 = 0.0;
    s.theta2 = wrap_phase(std::arg(u(0, 1)) - pi / 2.0);
  } else {
    s.eta = std::clamp(sin_w * sin_w, 0.0, 1.0);
    s.theta1 = wrap_phase(std::arg(u(1, 0)) - pi / 2.0);
    s.theta2 = wrap_phase(std::arg(u(0, 1)) - pi / 2.0);
  }
  return s;
}

GateSettings synth_polarization(const QubitMatrix& target) {
  require_timebin_target(target);
  const Eigen::Matrix2cd x = named_gate("X").m;
  GateSettings s;
  s.scheme = Scheme::polarization;
  s.jones = x * target.m * x;
  s.gamma = 0.0;
  return s;
}

double verify_settings(const GateSettings& settings, const QubitMatrix& target) {
  GateSettings ideal = settings;
  ideal.imperfections = Imperfections::ideal();
  const CircuitSpec circuit = (ideal.scheme == Scheme::dualrail)
                                  ? dualrail_gate(ideal)
                                  : polarization_gate(ideal);
  return fidelity_up_to_phase(target, effective_qubit_map(circuit));
}

Eigen::Matrix2cd haar_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix2cd g;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      g(r, c) = Complex(normal(rng), normal(rng));
    }
  }
  const Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 2; ++c) {
    const Complex d = r(c, c);
    q.col(c) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

}  // namespace timebin
