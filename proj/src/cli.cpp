#include "timebin/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "timebin/analysis.hpp"
#include "timebin/circuit_file.hpp"
#include "timebin/circuits.hpp"
#include "timebin/synthesis.hpp"

namespace timebin {

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string row(const std::string& label, const std::string& value,
                int label_width = 14) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s%s\n", label_width, label.c_str(),
                value.c_str());
  return buf;
}

QubitMatrix parse_target_or_throw(const std::string& arg) {
  const QubitMatrix m = parse_matrix_arg(arg);
  if (m.unitarity_residual() > kUnitaryResidualLimit) {
    throw NotUnitary("target matrix is not unitary within 1e-8");
  }
  return m;
}

void print_settings(const GateSettings& s, double fidelity, std::ostream& out) {
  out << row("scheme", to_string(s.scheme));
  if (s.scheme == Scheme::dualrail) {
    out << row("eta", fixed(s.eta, 6));
    out << row("theta1", fixed(s.theta1, 6));
    out << row("theta2", fixed(s.theta2, 6));
  } else {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const std::string label = "jones" + std::to_string(r) + std::to_string(c);
        out << row(label, fixed(s.jones(r, c).real(), 6) + " " +
                              fixed(s.jones(r, c).imag(), 6));
      }
    }
  }
  out << row("gamma", fixed(s.gamma, 6));
  out << row("fidelity", fixed(fidelity, 6));
}

int cmd_synth(const std::string& target_arg, const std::string& scheme_arg,
              const std::string& out_path, int window, std::ostream& out) {
  const QubitMatrix target = parse_target_or_throw(target_arg);
  const Scheme scheme = scheme_from_string(scheme_arg);
  const GateSettings settings = (scheme == Scheme::dualrail)
                                    ? synth_dualrail(target)
                                    : synth_polarization(target);
  const double fidelity = verify_settings(settings, target);
  print_settings(settings, fidelity, out);
  if (!out_path.empty()) {
    save_circuit_file(CircuitFile{settings, window}, out_path);
  }
  return 0;
}

PhotonState input_state(const CircuitSpec& circuit, const std::string& basis,
                        const std::string& input_spec) {
  const auto modes = input_qubit_modes(circuit);
  if (!basis.empty()) {
    if (basis != "s" && basis != "l") {
      throw InvalidInput("--basis must be s or l");
    }
    return PhotonState::make({{modes[basis == "s" ? 0 : 1], Complex(1.0, 0.0)}});
  }
  double alpha = 0.0;
  double phi = 0.0;
  if (std::sscanf(input_spec.c_str(), "%lf,%lf", &alpha, &phi) != 2) {
    throw InvalidInput("--input must be 'alpha,phi'");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidAmplitude("alpha must lie in [0,1]");
  }
  const double beta = std::sqrt(1.0 - alpha * alpha);
  return PhotonState::make(
      {{modes[0], Complex(alpha, 0.0)},
       {modes[1], std::polar(beta, phi)}});
}

int cmd_simulate(const std::string& circuit_path, const std::string& basis,
                 const std::string& input_spec, const std::string& csv_path,
                 std::ostream& out) {
  const CircuitSpec circuit = build_circuit(load_circuit_file(circuit_path));
  const PhotonState result = run(circuit, input_state(circuit, basis, input_spec));

  out << row("mode", "re            im            probability", 14);
  for (const auto& [mode, amp] : result.amplitudes()) {
    out << row(to_string(mode), fixed(amp.real(), 6) + "      " +
                                    fixed(amp.imag(), 6) + "      " +
                                    fixed(std::norm(amp), 6));
  }
  out << row("P(s)", fixed(std::norm(result.amplitude(circuit.qubit_out[0])), 6));
  out << row("P(l)", fixed(std::norm(result.amplitude(circuit.qubit_out[1])), 6));
  out << row("survival", fixed(result.total_probability(), 6));

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw CircuitFileError("cannot write '" + csv_path + "'");
    csv << "mode,re,im,probability\n";
    char line[160];
    for (const auto& [mode, amp] : result.amplitudes()) {
      std::snprintf(line, sizeof line, "%s,%.12g,%.12g,%.12g\n",
                    to_string(mode).c_str(), amp.real(), amp.imag(),
                    std::norm(amp));
      csv << line;
    }
  }
  return 0;
}

int cmd_budget(const std::string& circuit_path, std::ostream& out) {
  const CircuitSpec circuit = build_circuit(load_circuit_file(circuit_path));
  const LossBudget budget = loss_budget(circuit);
  out << row("stage", "loss_db");
  for (const auto& [label, db] : budget.stage_db) {
    out << row(label, fixed(db, 2));
  }
  out << row("total_db", fixed(budget.total_db, 2));
  out << row("survival", fixed(budget.survival, 6));
  out << row("simulated", fixed(budget.simulated_survival, 6));
  return 0;
}

int cmd_sweep(const std::string& circuit_path, const std::string& target_arg,
              const TolerancePolicy& policy, const std::string& csv_path,
              std::ostream& out) {
  const CircuitFile file = load_circuit_file(circuit_path);
  const QubitMatrix target = parse_target_or_throw(target_arg);
  const ToleranceReport report = monte_carlo_sweep(
      target, file.settings.scheme, policy, file.settings);

  out << row("samples", std::to_string(report.samples));
  out << row("seed", std::to_string(report.seed));
  const auto emit = [&](const std::string& name, const SweepStats& s) {
    out << row(name + "_mean", fixed(s.mean, 6));
    out << row(name + "_std", fixed(s.stddev, 6));
    out << row(name + "_min", fixed(s.min, 6));
    out << row(name + "_p05", fixed(s.p05, 6));
    out << row(name + "_p50", fixed(s.p50, 6));
    out << row(name + "_p95", fixed(s.p95, 6));
  };
  emit("fidelity", report.fidelity);
  emit("survival", report.survival);

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw CircuitFileError("cannot write '" + csv_path + "'");
    write_sweep_csv(report, csv);
  }
  return 0;
}

int cmd_calc(std::optional<double> rate_hz, std::optional<double> dt_s,
             std::optional<double> dT_k, std::ostream& out) {
  const ThermalModel model;
  const double length = path_length_difference(dt_s, rate_hz, model);
  const double dt = dt_s ? *dt_s : 1.0 / *rate_hz;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", dt);
  out << row("dt_s", buf);
  out << row("length_m", fixed(length, 6));
  out << row("length_cm", fixed(length * 100.0, 6));
  if (dT_k) {
    const ThermalDrift drift = thermal_phase_drift(length, *dT_k, model);
    out << row("dT_K", fixed(*dT_k, 6));
    out << row("dphi_rad", fixed(drift.delta_phi_rad, 6));
    out << row("penalty", fixed(drift.fidelity_penalty, 6));
  }
  return 0;
}

}  // namespace

QubitMatrix parse_matrix_arg(const std::string& arg) {
  std::istringstream stream(arg);
  std::vector<double> raw;
  double value;
  while (stream >> value) raw.push_back(value);
  if (raw.empty()) {
    return named_gate(arg);  // throws InvalidInput for unknown names
  }
  if (raw.size() != 8) {
    throw InvalidInput("matrix argument needs 8 reals (row-major re/im), got " +
                       std::to_string(raw.size()));
  }
  QubitMatrix m;
  for (int k = 0; k < 4; ++k) {
    m.m(k / 2, k % 2) = Complex(raw[2 * k], raw[2 * k + 1]);
  }
  return m;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Time-bin qubit gate synthesis and simulation"};
  app.require_subcommand(1);

  std::string target_arg, scheme_arg, out_path, circuit_path, basis, input_spec,
      csv_path;
  int window = kDefaultWindow;
  TolerancePolicy policy;
  policy.samples = 1000;
  std::optional<double> rate_hz, dt_s, dT_k;

  auto* synth = app.add_subcommand(
      "synth", "Solve component settings for a target unitary");
  synth->add_option("--target", target_arg,
                    "Named gate (I X Y Z H S T) or 8 reals")->required();
  synth->add_option("--scheme", scheme_arg, "polarization or dualrail")
      ->required();
  synth->add_option("--out", out_path, "Write the circuit file here");
  synth->add_option("--window", window, "Time window in slots");
  synth->callback(
      [&] { cmd_synth(target_arg, scheme_arg, out_path, window, out); });

  auto* simulate = app.add_subcommand(
      "simulate", "Run a single photon through a circuit file");
  simulate->add_option("--circuit", circuit_path, "Circuit file")->required();
  auto* basis_opt =
      simulate->add_option("--basis", basis, "Feed a basis state: s or l");
  simulate->add_option("--input", input_spec, "Feed alpha,phi")
      ->excludes(basis_opt);
  simulate->add_option("--csv", csv_path, "Write mode amplitudes as CSV");
  simulate->callback([&] {
    if (basis.empty() && input_spec.empty()) {
      throw CLI::RequiredError("--basis or --input");
    }
    cmd_simulate(circuit_path, basis, input_spec, csv_path, out);
  });

  auto* budget = app.add_subcommand("budget", "Itemize insertion losses");
  budget->add_option("--circuit", circuit_path, "Circuit file")->required();
  budget->callback([&] { cmd_budget(circuit_path, out); });

  auto* sweep = app.add_subcommand(
      "sweep", "Monte-Carlo tolerance sweep around a circuit's settings");
  sweep->add_option("--circuit", circuit_path, "Circuit file")->required();
  sweep->add_option("--target", target_arg, "Reference unitary")->required();
  sweep->add_option("--phase-std", policy.phase_std_rad,
                    "One-arm phase error std (rad)");
  sweep->add_option("--loss-spread", policy.loss_spread_db,
                    "Switch loss spread (dB)");
  sweep->add_option("--extinction", policy.extinction_db,
                    "Finite switch extinction (dB)");
  sweep->add_option("--eta-std", policy.eta_std, "Coupling ratio error std");
  sweep->add_option("--n", policy.samples, "Sample count");
  sweep->add_option("--seed", policy.seed, "Master seed");
  sweep->add_option("--threads", policy.threads, "Worker threads");
  sweep->add_option("--csv", csv_path, "Write per-sample results as CSV");
  sweep->callback(
      [&] { cmd_sweep(circuit_path, target_arg, policy, csv_path, out); });

  auto* calc = app.add_subcommand(
      "calc", "Path-length and thermal-stability estimates");
  auto* rate_opt = calc->add_option("--rate", rate_hz, "Switching rate (Hz)");
  calc->add_option("--dt", dt_s, "Time-bin separation (s)")->excludes(rate_opt);
  calc->add_option("--dT", dT_k, "Temperature step (K)");
  calc->callback([&] {
    if (!rate_hz && !dt_s) throw CLI::RequiredError("--rate or --dt");
    cmd_calc(rate_hz, dt_s, dT_k, out);
  });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("timebin");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()),
              const_cast<char**>(argv.data()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const CircuitFileError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace timebin
