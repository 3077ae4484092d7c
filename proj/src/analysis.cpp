#include "timebin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <thread>

#include "timebin/synthesis.hpp"

namespace timebin {

namespace {

using std::numbers::pi;

double nearest_rank(const std::vector<double>& sorted, double q) {
  const auto n = sorted.size();
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(n)));
  return sorted[std::min(n - 1, rank > 0 ? rank - 1 : 0)];
}

SweepStats stats_of(const std::vector<double>& values) {
  SweepStats s;
  double sum = 0.0;
  for (double v : values) sum += v;
  const auto n = static_cast<double>(values.size());
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.p05 = nearest_rank(sorted, 0.05);
  s.p50 = nearest_rank(sorted, 0.50);
  s.p95 = nearest_rank(sorted, 0.95);
  return s;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

double fidelity_up_to_phase(const QubitMatrix& u, const QubitMatrix& v) {
  if (u.unitarity_residual() > kUnitaryResidualLimit) {
    throw NotUnitary("fidelity reference must be unitary");
  }
  const double v_weight = (v.m.adjoint() * v.m).trace().real();
  if (v_weight <= kPruneThreshold * kPruneThreshold) {
    throw ZeroMap("cannot score a zero map");
  }
  const double overlap = std::abs((u.m.adjoint() * v.m).trace());
  return std::min(1.0, overlap / std::sqrt(2.0 * v_weight));
}

LossBudget loss_budget(const CircuitSpec& c) {
  LossBudget budget;
  for (const auto& stage : c.stages) {
    budget.stage_db.emplace_back(stage.label, stage.loss_db);
    budget.total_db += stage.loss_db;
  }
  budget.survival = db_to_power(budget.total_db);

  // Cross-check against a real run of an equal superposition over the
  // declared input port.
  std::vector<std::pair<Mode, Complex>> entries;
  const double amp = 1.0 / std::sqrt(static_cast<double>(c.input.slots.size()));
  for (int slot : c.input.slots) {
    entries.emplace_back(Mode{c.input.path, slot, c.input.pol},
                         Complex(amp, 0.0));
  }
  budget.simulated_survival =
      run(c, PhotonState::make(entries)).total_probability();
  return budget;
}

double path_length_difference(std::optional<double> dt_s,
                              std::optional<double> rate_hz,
                              const ThermalModel& model) {
  if (dt_s.has_value() == rate_hz.has_value()) {
    throw InvalidInput("give exactly one of dt and rate");
  }
  double dt;
  if (rate_hz) {
    if (!(*rate_hz > 0.0)) throw InvalidInput("rate must be > 0");
    dt = 1.0 / *rate_hz;
  } else {
    if (!(*dt_s >= 0.0)) throw InvalidInput("dt must be >= 0");
    dt = *dt_s;
  }
  return kSpeedOfLight * dt / model.effective_index;
}

ThermalDrift thermal_phase_drift(double delta_length_m, double delta_temp_k,
                                 const ThermalModel& model) {
  if (delta_length_m < 0.0 || delta_temp_k < 0.0) {
    throw InvalidInput("length imbalance and temperature step must be >= 0");
  }
  ThermalDrift d;
  d.delta_phi_rad = (2.0 * pi / model.wavelength_m) * delta_length_m *
                    delta_temp_k *
                    (model.dn_dT + model.effective_index *
                                       model.thermal_expansion);
  d.fidelity_penalty = 1.0 - std::cos(d.delta_phi_rad / 2.0);
  return d;
}

ToleranceReport monte_carlo_sweep(const QubitMatrix& target, Scheme scheme,
                                  const TolerancePolicy& policy,
                                  const std::optional<GateSettings>& base) {
  if (policy.samples < 1) throw InvalidInput("sample count must be >= 1");
  if (policy.phase_std_rad < 0.0 || policy.loss_spread_db < 0.0 ||
      policy.eta_std < 0.0) {
    throw InvalidInput("perturbation spreads must be >= 0");
  }
  if (policy.threads < 1) throw InvalidInput("thread count must be >= 1");

  const GateSettings nominal =
      base.has_value() ? *base
                       : (scheme == Scheme::dualrail ? synth_dualrail(target)
                                                     : synth_polarization(target));
  if (nominal.scheme != scheme) {
    throw InvalidInput("base settings do not match the requested scheme");
  }

  ToleranceReport report;
  report.samples = policy.samples;
  report.seed = policy.seed;
  report.results.resize(static_cast<std::size_t>(policy.samples));

  const auto evaluate = [&](std::uint64_t index) {
    auto rng = sample_rng(policy.seed, index);
    std::normal_distribution<double> normal(0.0, 1.0);
    GateSettings s = nominal;
    // Fixed draw order keeps streams aligned across runs of one policy.
    if (policy.phase_std_rad > 0.0) {
      s.imperfections.drift_phase_rad += policy.phase_std_rad * normal(rng);
    }
    if (policy.loss_spread_db > 0.0) {
      const double loss = s.imperfections.switch_loss_db +
                          policy.loss_spread_db * normal(rng);
      s.imperfections.switch_loss_db = std::max(0.0, loss);
    }
    if (!std::isinf(policy.extinction_db)) {
      s.imperfections.switch_extinction_db = policy.extinction_db;
    }
    if (policy.eta_std > 0.0 && scheme == Scheme::dualrail) {
      s.imperfections.eta_error += policy.eta_std * normal(rng);
    }
    const CircuitSpec circuit = (scheme == Scheme::dualrail)
                                    ? dualrail_gate(s)
                                    : polarization_gate(s);
    const QubitMatrix map = effective_qubit_map(circuit);
    SampleResult r;
    r.survival = 0.5 * (map.m.adjoint() * map.m).trace().real();
    r.fidelity = fidelity_up_to_phase(target, map);
    report.results[static_cast<std::size_t>(index)] = r;
  };

  if (policy.threads == 1) {
    for (int i = 0; i < policy.samples; ++i) {
      evaluate(static_cast<std::uint64_t>(i));
    }
  } else {
    std::vector<std::thread> workers;
    const int n_threads = std::min(policy.threads, policy.samples);
    workers.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
      workers.emplace_back([&, t] {
        for (int i = t; i < policy.samples; i += n_threads) {
          evaluate(static_cast<std::uint64_t>(i));
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<double> fids, survs;
  fids.reserve(report.results.size());
  survs.reserve(report.results.size());
  for (const auto& r : report.results) {
    fids.push_back(r.fidelity);
    survs.push_back(r.survival);
  }
  report.fidelity = stats_of(fids);
  report.survival = stats_of(survs);
  return report;
}

void write_sweep_csv(const ToleranceReport& report, std::ostream& out) {
  out << "sample,fidelity,survival\n";
  char line[96];
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.12g,%.12g\n", i,
                  report.results[i].fidelity, report.results[i].survival);
    out << line;
  }
}

}  // namespace timebin
