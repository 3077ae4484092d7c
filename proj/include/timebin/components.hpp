#ifndef TIMEBIN_COMPONENTS_HPP
#define TIMEBIN_COMPONENTS_HPP

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Core>

#include "timebin/core.hpp"

namespace timebin {

// Amplitude conventions, fixed once for the whole library:
//
//  * Insertion loss in power dB scales amplitudes by 10^(-dB/20).
//  * Extinction ratio in power dB puts leakage power eps = 10^(-dB/10)
//    on the wrong port, amplitude sqrt(eps) with phase 0 (coherent).
//  * The variable coupler is the symmetric fused-coupler form
//        B(w) = [[cos w, i sin w], [i sin w, cos w]],  w = arcsin(sqrt(eta)),
//    where eta is the cross-coupled power fraction. B(w1) B(w2) = B(w1+w2).
//  * Delay lines are phase-neutral; every interferometric phase lives in an
//    explicit phase shifter.
//  * The PBSC transmits H on its first port and reflects V on its second;
//    light exiting the unused port is tracked as norm deficit, not a mode.

inline constexpr double kInfiniteExtinction =
    std::numeric_limits<double>::infinity();

// Paper-quoted insertion loss of one electro-optic switch pass.
inline constexpr double kDefaultSwitchLossDb = 1.5;

inline double db_to_amplitude(double db) { return std::pow(10.0, -db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, -db / 10.0); }

// Leakage power fraction for an extinction ratio in dB; infinite => 0.
double extinction_leakage(double extinction_db);

// Per-slot output port of a 1x2 switch (or input port of a 2x1 combiner).
struct RouteTable {
  std::map<int, std::string> slot_to_path;
};

// Fills every slot of the window: `routed` where given, `rest` elsewhere.
RouteTable make_routes(const std::map<int, std::string>& routed,
                       const std::string& rest, int window);

// Tunable beam splitter acting identically on every time slot and
// polarization of the two paths. eta = 0 is the bar state.
ModeTransform variable_coupler(const std::string& path_a,
                               const std::string& path_b, double eta,
                               double loss_db = 0.0,
                               int window = kDefaultWindow);

// Multiplies every mode on `path` by e^{i theta} (lossless piezo shifter).
ModeTransform phase_shifter(const std::string& path, double theta,
                            double loss_db = 0.0, int window = kDefaultWindow);

// Shifts time slots on `path` by k bins, phase-neutral.
ModeTransform delay(const std::string& path, int k_slots, double loss_db = 0.0,
                    int window = kDefaultWindow);

// 1x2 electro-optic switch: routes each slot of `input_path` to the port
// named in `routes`, with sqrt(eps) coherent leakage on the other port.
ModeTransform switch_route(const std::string& input_path,
                           const std::string& out_a, const std::string& out_b,
                           const RouteTable& routes, double loss_db,
                           double extinction_db = kInfiniteExtinction,
                           int window = kDefaultWindow);

// The same switch run backwards as a 2x1 combiner (transposed transform).
// `routes` names the input port forwarded to `out_path` at each slot; the
// other port contributes only leakage and mostly exits the unused direction.
ModeTransform switch_combine(const std::string& in_a, const std::string& in_b,
                             const std::string& out_path,
                             const RouteTable& routes, double loss_db,
                             double extinction_db = kInfiniteExtinction,
                             int window = kDefaultWindow);

// Polarization beam splitter/combiner, combining orientation: H on path_a
// and V on path_b exit on out_path; wrong-polarization input leaks through
// with amplitude sqrt(eps), the remainder leaving via the discarded port.
ModeTransform pbsc_combine(const std::string& path_a, const std::string& path_b,
                           const std::string& out_path,
                           double extinction_db = kInfiniteExtinction,
                           int window = kDefaultWindow);

// Splitting orientation: H of `input_path` exits on out_a, V on out_b.
ModeTransform pbsc_split(const std::string& input_path, const std::string& out_a,
                         const std::string& out_b,
                         double extinction_db = kInfiniteExtinction,
                         int window = kDefaultWindow);

// Applies a unitary Jones matrix (H,V ordering) on every slot of `path`.
ModeTransform polarization_controller(const std::string& path,
                                      const Eigen::Matrix2cd& jones,
                                      int window = kDefaultWindow);

}  // namespace timebin

#endif
