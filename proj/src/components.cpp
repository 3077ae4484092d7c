#include "timebin/components.hpp"

#include <cmath>
#include <iterator>

namespace timebin {

namespace {

constexpr Complex kI(0.0, 1.0);
constexpr Pol kPols[] = {Pol::H, Pol::V};

void check_loss(double loss_db) {
  if (loss_db < 0.0 || std::isnan(loss_db)) {
    throw InvalidInput("insertion loss must be >= 0 dB");
  }
}

void check_extinction(double extinction_db) {
  if (std::isnan(extinction_db) || extinction_db <= 0.0) {
    throw InvalidInput("extinction ratio must be > 0 dB (or infinite)");
  }
}

void check_distinct(std::initializer_list<std::string> paths) {
  for (auto a = paths.begin(); a != paths.end(); ++a) {
    for (auto b = std::next(a); b != paths.end(); ++b) {
      if (*a == *b) {
        throw InvalidInput("component paths must be distinct, got '" + *a +
                           "' twice");
      }
    }
  }
}

void check_routes(const RouteTable& routes, const std::string& port_a,
                  const std::string& port_b, int window) {
  for (int slot = 0; slot < window; ++slot) {
    const auto it = routes.slot_to_path.find(slot);
    if (it == routes.slot_to_path.end()) {
      throw InvalidInput("route table misses slot " + std::to_string(slot));
    }
    if (it->second != port_a && it->second != port_b) {
      throw InvalidInput("route table sends slot " + std::to_string(slot) +
                         " to unknown port '" + it->second + "'");
    }
  }
}

}  // namespace

double extinction_leakage(double extinction_db) {
  check_extinction(extinction_db);
  return std::isinf(extinction_db) ? 0.0 : db_to_power(extinction_db);
}

RouteTable make_routes(const std::map<int, std::string>& routed,
                       const std::string& rest, int window) {
  RouteTable t;
  for (int slot = 0; slot < window; ++slot) t.slot_to_path[slot] = rest;
  for (const auto& [slot, path] : routed) t.slot_to_path[slot] = path;
  return t;
}

ModeTransform variable_coupler(const std::string& path_a,
                               const std::string& path_b, double eta,
                               double loss_db, int window) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidRatio("coupling ratio must lie in [0,1], got " +
                       std::to_string(eta));
  }
  check_loss(loss_db);
  check_distinct({path_a, path_b});
  const double w = std::asin(std::sqrt(eta));
  const double g = db_to_amplitude(loss_db);
  const Complex bar = g * std::cos(w);
  const Complex cross = g * kI * std::sin(w);
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    for (Pol pol : kPols) {
      const Mode a{path_a, slot, pol};
      const Mode b{path_b, slot, pol};
      cols[a] = {{a, bar}, {b, cross}};
      cols[b] = {{a, cross}, {b, bar}};
    }
  }
  return ModeTransform(std::move(cols), window);
}

ModeTransform phase_shifter(const std::string& path, double theta,
                            double loss_db, int window) {
  check_loss(loss_db);
  const Complex factor = db_to_amplitude(loss_db) * std::exp(kI * theta);
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    for (Pol pol : kPols) {
      const Mode m{path, slot, pol};
      cols[m] = {{m, factor}};
    }
  }
  return ModeTransform(std::move(cols), window);
}

ModeTransform delay(const std::string& path, int k_slots, double loss_db,
                    int window) {
  if (k_slots < 0) throw InvalidInput("delay must be >= 0 slots");
  check_loss(loss_db);
  const double g = db_to_amplitude(loss_db);
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    for (Pol pol : kPols) {
      const Mode in{path, slot, pol};
      const Mode out{path, slot + k_slots, pol};
      cols[in] = {{out, Complex(g, 0.0)}};
    }
  }
  return ModeTransform(std::move(cols), window);
}

ModeTransform switch_route(const std::string& input_path,
                           const std::string& out_a, const std::string& out_b,
                           const RouteTable& routes, double loss_db,
                           double extinction_db, int window) {
  check_loss(loss_db);
  check_distinct({input_path, out_a, out_b});
  check_routes(routes, out_a, out_b, window);
  const double eps = extinction_leakage(extinction_db);
  const double g = db_to_amplitude(loss_db);
  const Complex routed_amp(g * std::sqrt(1.0 - eps), 0.0);
  const Complex leak_amp(g * std::sqrt(eps), 0.0);
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    const std::string& routed = routes.slot_to_path.at(slot);
    const std::string& other = (routed == out_a) ? out_b : out_a;
    for (Pol pol : kPols) {
      const Mode in{input_path, slot, pol};
      cols[in] = {{Mode{routed, slot, pol}, routed_amp},
                  {Mode{other, slot, pol}, leak_amp}};
    }
  }
  return ModeTransform(std::move(cols), window);
}

ModeTransform switch_combine(const std::string& in_a, const std::string& in_b,
                             const std::string& out_path,
                             const RouteTable& routes, double loss_db,
                             double extinction_db, int window) {
  check_loss(loss_db);
  check_distinct({in_a, in_b, out_path});
  check_routes(routes, in_a, in_b, window);
  const double eps = extinction_leakage(extinction_db);
  const double g = db_to_amplitude(loss_db);
  const Complex routed_amp(g * std::sqrt(1.0 - eps), 0.0);
  const Complex leak_amp(g * std::sqrt(eps), 0.0);
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    const std::string& routed = routes.slot_to_path.at(slot);
    for (const std::string& port : {in_a, in_b}) {
      for (Pol pol : kPols) {
        const Mode in{port, slot, pol};
        const Mode out{out_path, slot, pol};
        cols[in] = {{out, port == routed ? routed_amp : leak_amp}};
      }
    }
  }
  return ModeTransform(std::move(cols), window);
}

ModeTransform pbsc_combine(const std::string& path_a, const std::string& path_b,
                           const std::string& out_path, double extinction_db,
                           int window) {
  check_distinct({path_a, path_b, out_path});
  const double eps = extinction_leakage(extinction_db);
  const Complex pass(std::sqrt(1.0 - eps), 0.0);
  const Complex leak(std::sqrt(eps), 0.0);
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    const Mode out_h{out_path, slot, Pol::H};
    const Mode out_v{out_path, slot, Pol::V};
    cols[Mode{path_a, slot, Pol::H}] = {{out_h, pass}};
    cols[Mode{path_a, slot, Pol::V}] = {{out_v, leak}};
    cols[Mode{path_b, slot, Pol::V}] = {{out_v, pass}};
    cols[Mode{path_b, slot, Pol::H}] = {{out_h, leak}};
  }
  return ModeTransform(std::move(cols), window);
}

ModeTransform pbsc_split(const std::string& input_path, const std::string& out_a,
                         const std::string& out_b, double extinction_db,
                         int window) {
  check_distinct({input_path, out_a, out_b});
  const double eps = extinction_leakage(extinction_db);
  const Complex pass(std::sqrt(1.0 - eps), 0.0);
  const Complex leak(std::sqrt(eps), 0.0);
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    cols[Mode{input_path, slot, Pol::H}] = {{Mode{out_a, slot, Pol::H}, pass},
                                            {Mode{out_b, slot, Pol::H}, leak}};
    cols[Mode{input_path, slot, Pol::V}] = {{Mode{out_b, slot, Pol::V}, pass},
                                            {Mode{out_a, slot, Pol::V}, leak}};
  }
  return ModeTransform(std::move(cols), window);
}

ModeTransform polarization_controller(const std::string& path,
                                      const Eigen::Matrix2cd& jones,
                                      int window) {
  const Eigen::Matrix2cd residual =
      jones.adjoint() * jones - Eigen::Matrix2cd::Identity();
  if (residual.cwiseAbs().maxCoeff() > 1e-10) {
    throw NotUnitary("Jones matrix is not unitary within 1e-10");
  }
  ModeTransform::ColumnMap cols;
  for (int slot = 0; slot < window; ++slot) {
    const Mode h{path, slot, Pol::H};
    const Mode v{path, slot, Pol::V};
    cols[h] = {{h, jones(0, 0)}, {v, jones(1, 0)}};
    cols[v] = {{h, jones(0, 1)}, {v, jones(1, 1)}};
  }
  return ModeTransform(std::move(cols), window);
}

}  // namespace timebin
