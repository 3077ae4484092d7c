#ifndef TIMEBIN_SYNTHESIS_HPP
#define TIMEBIN_SYNTHESIS_HPP

#include <random>

#include <Eigen/Core>

#include "timebin/circuits.hpp"
#include "timebin/core.hpp"

namespace timebin {

// Targets are accepted up to this unitarity residual.
inline constexpr double kUnitaryResidualLimit = 1e-8;

struct PhaseFactorResult {
  double gamma = 0.0;          // in (-pi, pi]
  Eigen::Matrix2cd canonical;  // U = e^{i gamma} * canonical
};

// Factors U = e^{i gamma} U' with U'(1,1) real and >= 0. When that entry
// vanishes, gamma is chosen so that arg U'(1,0) = pi/2 instead, which pins
// the free phase the same way the coupler convention does.
PhaseFactorResult factor_global_phase(const Eigen::Matrix2cd& u);

// Settings (eta, theta1, theta2, gamma) with
//     e^{i gamma} P(theta2) B(w) P(theta1) = U,   w = arcsin(sqrt(eta)),
// where P(theta) = diag(e^{i theta}, 1) acts on the upper rail. This
// construction is exact for every 2x2 unitary, which is the constructive
// proof that one coupler between two phase shifters suffices.
//
// With U' the phase-factored target: cos w = U'(1,1),
// theta1 = arg U'(1,0) - pi/2, theta2 = arg U'(0,1) - pi/2. Degenerate
// corners pin the free phase as theta1 = 0 (w = 0 additionally puts the
// whole phase in theta2 = arg U'(0,0)).
GateSettings synth_dualrail(const QubitMatrix& target);

// Jones matrix X U X for the polarization controller: the gate conjugates
// the controller by the basis map |s> -> |V>, |l> -> |H>, which in (H,V)
// ordering is the permutation X. gamma is 0; the gate realizes U exactly.
GateSettings synth_polarization(const QubitMatrix& target);

// Builds the ideal circuit for `settings` and scores its effective map
// against the target, insensitive to global phase and uniform loss.
double verify_settings(const GateSettings& settings, const QubitMatrix& target);

// Haar-distributed 2x2 unitary: QR of a complex Ginibre sample with the
// R-diagonal phases folded back in.
Eigen::Matrix2cd haar_unitary(std::mt19937_64& rng);

}  // namespace timebin

#endif
