#ifndef TIMEBIN_ANALYSIS_HPP
#define TIMEBIN_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "timebin/circuits.hpp"
#include "timebin/core.hpp"

namespace timebin {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Fiber parameters for timing and thermal estimates. The refractive-index
// values are standard fused-silica constants at telecom wavelengths.
struct ThermalModel {
  double wavelength_m = 1.55e-6;
  double effective_index = 1.468;
  double dn_dT = 1.06e-5;             // 1/K
  double thermal_expansion = 5.5e-7;  // 1/K
};

// |Tr(U^dag V)| / sqrt(2 Tr(V^dag V)): 1 exactly when V is U up to a
// complex scale, so uniform loss and global phase do not count against a
// gate. U must be unitary, V nonzero.
double fidelity_up_to_phase(const QubitMatrix& u, const QubitMatrix& v);

struct LossBudget {
  std::vector<std::pair<std::string, double>> stage_db;
  double total_db = 0.0;
  double survival = 1.0;            // 10^(-total/10)
  double simulated_survival = 1.0;  // norm of an equal superposition run
};

// Itemizes each stage's configured insertion loss and cross-checks the dB
// product against an actual simulation of the circuit.
LossBudget loss_budget(const CircuitSpec& c);

// Arm length imbalance L = c dt / n realizing one time-bin separation dt
// as group delay in fiber of index n. Exactly one of dt (seconds) and
// rate (Hz, dt = 1/rate) must be given.
double path_length_difference(std::optional<double> dt_s,
                              std::optional<double> rate_hz,
                              const ThermalModel& model = {});

struct ThermalDrift {
  double delta_phi_rad = 0.0;
  double fidelity_penalty = 0.0;  // 1 - cos(delta_phi / 2)
};

// Relative phase drift of an interferometer whose arms differ by dL when
// the temperature moves by dT:
//     dphi = (2 pi / lambda) dL dT (dn/dT + n alpha).
// Only the uncompensated imbalance contributes; common-mode drift of the
// full arm length cancels in the relative phase. The penalty is the exact
// fidelity loss of a one-arm phase error diag(e^{i dphi}, 1) on any gate.
ThermalDrift thermal_phase_drift(double delta_length_m, double delta_temp_k,
                                 const ThermalModel& model = {});

// Perturbation distributions for tolerance sweeps. The phase error models
// the net interferometer drift as a single one-arm phase per sample; the
// loss spread perturbs each sample's switch loss around its configured
// value (clipped at 0 dB); a finite extinction applies to both switches;
// the coupling error perturbs the dual-rail coupler's ratio (clipped to
// [0,1]).
struct TolerancePolicy {
  double phase_std_rad = 0.0;
  double loss_spread_db = 0.0;
  double extinction_db = kInfiniteExtinction;
  double eta_std = 0.0;
  int samples = 1;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SweepStats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  double p05 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
};

struct SampleResult {
  double fidelity = 0.0;
  double survival = 0.0;
};

struct ToleranceReport {
  int samples = 0;
  std::uint64_t seed = 0;
  SweepStats fidelity;
  SweepStats survival;
  std::vector<SampleResult> results;  // in sample order
};

// Per-sample RNG streams are derived from (seed, index), so the report is
// identical for any thread count and any evaluation order. `base` supplies
// the nominal settings to perturb; when absent they are synthesized from
// the target.
ToleranceReport monte_carlo_sweep(const QubitMatrix& target, Scheme scheme,
                                  const TolerancePolicy& policy,
                                  const std::optional<GateSettings>& base = {});

// CSV with header "sample,fidelity,survival", LF line endings.
void write_sweep_csv(const ToleranceReport& report, std::ostream& out);

}  // namespace timebin

#endif
