#include "timebin/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace timebin {

namespace {

using std::numbers::pi;

// Which side of a stage a relative-phase error attaches to. Splitting
// stages take it on an output arm, combining stages on an input arm;
// either side works for stages confined to one path.
enum class PhaseSide { before, after };

// Resolves one stage's effective settings against the per-stage overrides
// and appends it, composing any drift phase onto the given arm.
class StageAssembler {
 public:
  StageAssembler(CircuitSpec& circuit, const Imperfections& imp)
      : circuit_(circuit), imp_(imp) {}

  double loss(const std::string& label, double kind_default) const {
    if (const auto* o = find(label); o && o->loss_db) return *o->loss_db;
    return kind_default;
  }

  double extinction(const std::string& label, double kind_default) const {
    if (const auto* o = find(label); o && o->extinction_db) {
      return *o->extinction_db;
    }
    return kind_default;
  }

  void add(const std::string& label, ModeTransform t, double loss_db,
           const std::string& drift_path, PhaseSide side,
           double extra_phase = 0.0) {
    used_.insert(label);
    double err = extra_phase;
    if (const auto* o = find(label); o && o->phase_error) err += *o->phase_error;
    if (err != 0.0) {
      const ModeTransform shift =
          phase_shifter(drift_path, err, 0.0, circuit_.window);
      t = (side == PhaseSide::after) ? compose(shift, t) : compose(t, shift);
    }
    circuit_.stages.push_back({label, std::move(t), loss_db});
  }

  void check_overrides_used() const {
    for (const auto& [label, o] : imp_.stage_overrides) {
      if (!used_.count(label)) {
        throw InvalidInput("imperfection override targets unknown stage '" +
                           label + "'");
      }
    }
  }

 private:
  const StageOverride* find(const std::string& label) const {
    const auto it = imp_.stage_overrides.find(label);
    return it == imp_.stage_overrides.end() ? nullptr : &it->second;
  }

  CircuitSpec& circuit_;
  const Imperfections& imp_;
  std::set<std::string> used_;
};

void check_paths(const CircuitSpec& c) {
  std::set<std::string> paths{c.input.path, c.qubit_out[0].path,
                              c.qubit_out[1].path};
  for (const auto& stage : c.stages) {
    for (const auto& [in, col] : stage.transform.columns()) {
      paths.insert(in.path);
      for (const auto& [out, amp] : col) paths.insert(out.path);
    }
  }
  if (paths.size() > static_cast<std::size_t>(kMaxPaths)) {
    throw InvalidInput("circuit uses more than " + std::to_string(kMaxPaths) +
                       " path labels");
  }
}

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::string to_string(Scheme s) {
  return s == Scheme::polarization ? "polarization" : "dualrail";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "polarization") return Scheme::polarization;
  if (s == "dualrail") return Scheme::dualrail;
  throw InvalidInput("unknown scheme '" + s +
                     "' (expected polarization or dualrail)");
}

Imperfections Imperfections::ideal() {
  Imperfections imp;
  imp.switch_loss_db = 0.0;
  return imp;
}

CircuitSpec prepare_timebin(double alpha, double phi,
                            const Imperfections& imperfections, int window) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidAmplitude("alpha must lie in [0,1], got " +
                           std::to_string(alpha));
  }
  CircuitSpec c;
  c.window = window;
  c.input = {"in", {0}, Pol::H};
  c.qubit_out = {Mode{"out", 0, Pol::H}, Mode{"out", 1, Pol::H}};
  c.out_tag = BasisTag::timebin;

  StageAssembler add(c, imperfections);
  // cos w = alpha stays on the short (through) arm.
  const double eta = clip01(1.0 - alpha * alpha);
  const double vc_loss = add.loss("vc", imperfections.coupler_loss_db);
  add.add("vc", variable_coupler("in", "long", eta, vc_loss, window), vc_loss,
          "long", PhaseSide::after);
  add.add("delay_long", delay("long", 1, add.loss("delay_long", 0.0), window),
          add.loss("delay_long", 0.0), "long", PhaseSide::after);
  // phi - pi/2 cancels the coupler's i on the cross port.
  add.add("ps", phase_shifter("long", phi - pi / 2.0, add.loss("ps", 0.0),
                              window),
          add.loss("ps", 0.0), "long", PhaseSide::after);
  const double sw_loss = add.loss("sw_out", imperfections.switch_loss_db);
  const double sw_ext =
      add.extinction("sw_out", imperfections.switch_extinction_db);
  add.add("sw_out",
          switch_combine("in", "long", "out",
                         make_routes({{0, "in"}, {1, "long"}}, "in", window),
                         sw_loss, sw_ext, window),
          sw_loss, "long", PhaseSide::before);
  add.check_overrides_used();
  check_paths(c);
  return c;
}

CircuitSpec polarization_gate(const GateSettings& settings, int window) {
  if (settings.scheme != Scheme::polarization) {
    throw InvalidInput("settings are not for the polarization scheme");
  }
  const Imperfections& imp = settings.imperfections;
  const Eigen::Matrix2cd flip = named_gate("X").m;

  CircuitSpec c;
  c.window = window;
  c.input = {"in", {0, 1}, Pol::H};
  c.qubit_out = {Mode{"out", 1, Pol::H}, Mode{"out", 2, Pol::H}};
  c.out_tag = BasisTag::timebin;

  StageAssembler add(c, imp);
  if (imp.input_pol_misalignment_rad != 0.0) {
    const double a = imp.input_pol_misalignment_rad;
    Eigen::Matrix2cd rot;
    rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    add.add("input_pc", polarization_controller("in", rot, window), 0.0, "in",
            PhaseSide::after);
  }

  const double sw_in_loss = add.loss("sw_in", imp.switch_loss_db);
  const double sw_in_ext = add.extinction("sw_in", imp.switch_extinction_db);
  add.add("sw_in",
          switch_route("in", "lower", "upper",
                       make_routes({{0, "lower"}, {1, "upper"}}, "lower",
                                   window),
                       sw_in_loss, sw_in_ext, window),
          sw_in_loss, "upper", PhaseSide::after);

  add.add("pc_flip",
          polarization_controller("lower", flip, window),
          add.loss("pc_flip", 0.0), "lower", PhaseSide::after);
  // The delayed arm carries the interferometer's uncompensated length, so
  // the drift phase budget lands here.
  add.add("delay_l", delay("lower", 1, add.loss("delay_l", 0.0), window),
          add.loss("delay_l", 0.0), "lower", PhaseSide::after,
          imp.drift_phase_rad);

  const double pbsc_in_ext = add.extinction("pbsc_in", imp.pbsc_extinction_db);
  add.add("pbsc_in", pbsc_combine("upper", "lower", "mid", pbsc_in_ext, window),
          add.loss("pbsc_in", 0.0), "lower", PhaseSide::before);

  add.add("pc_gate", polarization_controller("mid", settings.jones, window),
          add.loss("pc_gate", 0.0), "mid", PhaseSide::after);

  const double pbsc_out_ext =
      add.extinction("pbsc_out", imp.pbsc_extinction_db);
  add.add("pbsc_out",
          pbsc_split("mid", "upper2", "lower2", pbsc_out_ext, window),
          add.loss("pbsc_out", 0.0), "upper2", PhaseSide::after);

  add.add("delay_u2", delay("upper2", 1, add.loss("delay_u2", 0.0), window),
          add.loss("delay_u2", 0.0), "upper2", PhaseSide::after);
  add.add("pc_unflip", polarization_controller("lower2", flip, window),
          add.loss("pc_unflip", 0.0), "lower2", PhaseSide::after);

  const double sw_out_loss = add.loss("sw_out", imp.switch_loss_db);
  const double sw_out_ext = add.extinction("sw_out", imp.switch_extinction_db);
  add.add("sw_out",
          switch_combine("upper2", "lower2", "out",
                         make_routes({{1, "lower2"}, {2, "upper2"}}, "upper2",
                                     window),
                         sw_out_loss, sw_out_ext, window),
          sw_out_loss, "lower2", PhaseSide::before);
  add.check_overrides_used();
  check_paths(c);
  return c;
}

CircuitSpec dualrail_gate(const GateSettings& settings, int window) {
  if (settings.scheme != Scheme::dualrail) {
    throw InvalidInput("settings are not for the dual-rail scheme");
  }
  const Imperfections& imp = settings.imperfections;

  CircuitSpec c;
  c.window = window;
  c.input = {"in", {0, 1}, Pol::H};
  c.qubit_out = {Mode{"out", 1, Pol::H}, Mode{"out", 2, Pol::H}};
  c.out_tag = BasisTag::timebin;

  StageAssembler add(c, imp);
  const double sw_in_loss = add.loss("sw_in", imp.switch_loss_db);
  const double sw_in_ext = add.extinction("sw_in", imp.switch_extinction_db);
  add.add("sw_in",
          switch_route("in", "upper", "lower",
                       make_routes({{0, "upper"}, {1, "lower"}}, "upper",
                                   window),
                       sw_in_loss, sw_in_ext, window),
          sw_in_loss, "upper", PhaseSide::after);

  add.add("delay_u", delay("upper", 1, add.loss("delay_u", 0.0), window),
          add.loss("delay_u", 0.0), "upper", PhaseSide::after,
          imp.drift_phase_rad);
  add.add("ps1", phase_shifter("upper", settings.theta1, add.loss("ps1", 0.0),
                               window),
          add.loss("ps1", 0.0), "upper", PhaseSide::after);

  const double vc_loss = add.loss("vc", imp.coupler_loss_db);
  add.add("vc",
          variable_coupler("upper", "lower",
                           clip01(settings.eta + imp.eta_error), vc_loss,
                           window),
          vc_loss, "upper", PhaseSide::after);

  add.add("ps2", phase_shifter("upper", settings.theta2, add.loss("ps2", 0.0),
                               window),
          add.loss("ps2", 0.0), "upper", PhaseSide::after);
  add.add("delay_l", delay("lower", 1, add.loss("delay_l", 0.0), window),
          add.loss("delay_l", 0.0), "lower", PhaseSide::after);

  const double sw_out_loss = add.loss("sw_out", imp.switch_loss_db);
  const double sw_out_ext = add.extinction("sw_out", imp.switch_extinction_db);
  add.add("sw_out",
          switch_combine("upper", "lower", "out",
                         make_routes({{1, "upper"}, {2, "lower"}}, "upper",
                                     window),
                         sw_out_loss, sw_out_ext, window),
          sw_out_loss, "lower", PhaseSide::before);
  add.check_overrides_used();
  check_paths(c);
  return c;
}

PhotonState run(const CircuitSpec& c, const PhotonState& s) {
  for (const auto& [mode, amp] : s.amplitudes()) {
    const bool in_port =
        mode.path == c.input.path && mode.pol == c.input.pol &&
        std::find(c.input.slots.begin(), c.input.slots.end(), mode.time_slot) !=
            c.input.slots.end();
    if (!in_port) {
      throw InvalidInput("state occupies " + to_string(mode) +
                         " outside the declared input port");
    }
  }
  PhotonState state = s;
  for (const auto& stage : c.stages) state = apply(stage.transform, state);
  return state;
}

std::array<Mode, 2> input_qubit_modes(const CircuitSpec& c) {
  if (c.input.slots.size() != 2) {
    throw InvalidInput("circuit input port is not a two-slot qubit");
  }
  return {Mode{c.input.path, c.input.slots[0], c.input.pol},
          Mode{c.input.path, c.input.slots[1], c.input.pol}};
}

QubitMatrix effective_qubit_map(const CircuitSpec& c) {
  const auto in_modes = input_qubit_modes(c);
  QubitMatrix result;
  result.tag = c.out_tag;
  for (int col = 0; col < 2; ++col) {
    const PhotonState out =
        run(c, PhotonState::make({{in_modes[col], Complex(1.0, 0.0)}}));
    result.m(0, col) = out.amplitude(c.qubit_out[0]);
    result.m(1, col) = out.amplitude(c.qubit_out[1]);
  }
  return result;
}

ModeTransform composed_transform(const CircuitSpec& c) {
  ModeTransform total = ModeTransform::identity(c.window);
  for (const auto& stage : c.stages) total = compose(stage.transform, total);
  return total;
}

}  // namespace timebin
