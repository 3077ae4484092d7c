#ifndef TIMEBIN_CIRCUITS_HPP
#define TIMEBIN_CIRCUITS_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "timebin/components.hpp"
#include "timebin/core.hpp"

namespace timebin {

enum class Scheme : std::uint8_t { polarization, dualrail };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Per-stage replacement of the kind-level defaults below. Stage labels are
// stable identifiers, listed with each builder.
struct StageOverride {
  std::optional<double> loss_db;
  std::optional<double> extinction_db;
  std::optional<double> phase_error;  // radians, on the stage's drift arm
};

// Component imperfection knobs shared by all circuit builders. Defaults
// model the hardware the circuits assume: lossy switches, everything else
// ideal. ideal() zeroes the switch loss as well.
struct Imperfections {
  double switch_loss_db = kDefaultSwitchLossDb;
  double switch_extinction_db = kInfiniteExtinction;
  double pbsc_extinction_db = kInfiniteExtinction;
  double coupler_loss_db = 0.0;
  // Net differential phase of the gate interferometer, applied on the
  // delayed arm of the input section (the arm the thermal model budgets).
  double drift_phase_rad = 0.0;
  // Additive error on the variable coupler's power ratio (clipped to [0,1]).
  double eta_error = 0.0;
  // Rotation of the nominally H input polarization (polarization scheme).
  double input_pol_misalignment_rad = 0.0;
  std::map<std::string, StageOverride> stage_overrides;

  static Imperfections ideal();
};

struct Stage {
  std::string label;
  ModeTransform transform;
  double loss_db = 0.0;  // configured insertion loss, for budgeting
};

struct InputPort {
  std::string path;
  std::vector<int> slots;
  Pol pol = Pol::H;
};

// Ordered component stages plus the declared input port and output qubit
// basis. Immutable once built; run() is pure.
struct CircuitSpec {
  std::vector<Stage> stages;
  InputPort input;
  std::array<Mode, 2> qubit_out;
  BasisTag out_tag = BasisTag::timebin;
  int window = kDefaultWindow;
};

// Tunable degrees of freedom of one gate. gamma is the synthesized global
// phase; it is reported for bookkeeping but no component implements it.
struct GateSettings {
  Scheme scheme = Scheme::dualrail;
  double eta = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double gamma = 0.0;
  Eigen::Matrix2cd jones = Eigen::Matrix2cd::Identity();
  Imperfections imperfections;
};

// Interferometer that turns one pulse into alpha|s> + e^{i phi} beta |l>:
// variable coupler into short/long arms, phase shifter on the long arm
// (set to phi - pi/2 to cancel the coupler's i), switch recombination.
// Output arrives H-polarized on path "out", slots 0 and 1.
// Stages: vc, delay_long, ps, sw_out.
CircuitSpec prepare_timebin(double alpha, double phi,
                            const Imperfections& imperfections =
                                Imperfections::ideal(),
                            int window = kDefaultWindow);

// Gate via polarization conversion: the switch sends |s> to the lower
// branch (flipped to V and delayed) and |l> to the upper branch; the PBSC
// merges them into a single-rail polarization qubit (|s> -> |V>,
// |l> -> |H>), the controller applies its Jones matrix, and the mirrored
// section restores an H-polarized time-bin qubit on slots (1,2).
// Stages: sw_in, pc_flip, delay_l, pbsc_in, pc_gate, pbsc_out, delay_u2,
// pc_unflip, sw_out.
CircuitSpec polarization_gate(const GateSettings& settings,
                              int window = kDefaultWindow);

// Gate via dual-rail conversion: the switch sends |s> up and |l> down, a
// one-bin delay on the upper arm synchronizes them, PS(theta1) / VC(eta) /
// PS(theta2) act on the rails, and the mirrored section (delay on the
// lower arm, reversed switch) restores a time-bin qubit on slots (1,2).
// Stages: sw_in, delay_u, ps1, vc, ps2, delay_l, sw_out.
CircuitSpec dualrail_gate(const GateSettings& settings,
                          int window = kDefaultWindow);

// Sequentially applies all stages. The state must occupy the declared
// input port.
PhotonState run(const CircuitSpec& c, const PhotonState& s);

// Sends each declared input basis mode through the circuit and reads the
// output basis amplitudes columnwise; sub-unitary when lossy.
QubitMatrix effective_qubit_map(const CircuitSpec& c);

// Composition of all stages into a single transform.
ModeTransform composed_transform(const CircuitSpec& c);

// Input basis modes derived from the declared port (requires 2 slots).
std::array<Mode, 2> input_qubit_modes(const CircuitSpec& c);

}  // namespace timebin

#endif
