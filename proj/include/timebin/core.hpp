#ifndef TIMEBIN_CORE_HPP
#define TIMEBIN_CORE_HPP

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "timebin/errors.hpp"

namespace timebin {

using Complex = std::complex<double>;

// Amplitudes below this are pruned; states with identical physics have
// identical key sets.
inline constexpr double kPruneThreshold = 1e-15;

// Absolute tolerance for amplitude/matrix comparisons.
inline constexpr double kTolerance = 1e-12;

// Time slots live in [0, window); slots produced outside it are errors.
inline constexpr int kDefaultWindow = 8;

// Largest number of distinct path labels a single circuit may use.
inline constexpr int kMaxPaths = 8;

enum class Pol : std::uint8_t { H, V };

char to_char(Pol p);
Pol pol_from_char(char c);

// One single-photon occupation slot: spatial path, discrete time bin
// (units of the bin separation dt), and polarization.
struct Mode {
  std::string path;
  int time_slot = 0;
  Pol pol = Pol::H;

  auto operator<=>(const Mode&) const = default;
};

// "path:slot:pol", e.g. "in:0:H".
std::string to_string(const Mode& m);
Mode parse_mode(const std::string& key);

// Wraps an angle to (-pi, pi].
double wrap_phase(double angle);

// Sparse single-photon state vector. Immutable once constructed; the
// squared norm is the survival probability and never exceeds 1.
class PhotonState {
 public:
  PhotonState() = default;

  // Prunes tiny amplitudes and rejects norms above 1 + 1e-12.
  explicit PhotonState(std::map<Mode, Complex> amplitudes);

  // Factory used by callers that assemble states entry by entry;
  // rejects repeated modes before they could silently sum.
  static PhotonState make(const std::vector<std::pair<Mode, Complex>>& entries);

  const std::map<Mode, Complex>& amplitudes() const { return amps_; }
  Complex amplitude(const Mode& m) const;
  double total_probability() const;
  bool empty() const { return amps_.empty(); }

  bool operator==(const PhotonState&) const = default;

 private:
  std::map<Mode, Complex> amps_;
};

Complex inner_product(const PhotonState& a, const PhotonState& b);

// Rewrites the path label (and optionally shifts slots) of every mode on
// `from`. Used to feed one circuit's output into another's input port.
PhotonState relabel_path(const PhotonState& s, const std::string& from,
                         const std::string& to, int slot_shift = 0);

struct ProjectionResult {
  PhotonState state;
  double probability = 0.0;
};

// Restriction of s to the modes accepted by `keep`, with its Born
// probability. With renormalize the restriction is scaled back to norm 1;
// requesting that on an empty restriction is an error.
template <typename Predicate>
ProjectionResult project(const PhotonState& s, Predicate&& keep,
                         bool renormalize = false);

// Sparse linear map on the mode space. A mode present as a column key is
// "touched" (its column may even be empty, meaning the amplitude is
// discarded); untouched modes pass through unchanged. Entries may point at
// slots beyond the window: the overflow only becomes an error when a state
// actually occupies them under apply().
class ModeTransform {
 public:
  using Column = std::map<Mode, Complex>;
  using ColumnMap = std::map<Mode, Column>;

  ModeTransform() = default;
  ModeTransform(ColumnMap columns, int window);

  static ModeTransform identity(int window = kDefaultWindow);

  int window() const { return window_; }
  bool touches(const Mode& m) const { return cols_.count(m) != 0; }
  const Column* column(const Mode& m) const;
  const ColumnMap& columns() const { return cols_; }

 private:
  ColumnMap cols_;
  int window_ = kDefaultWindow;
};

// out[m'] = sum_m t[m',m] s[m], untouched modes passing through.
PhotonState apply(const ModeTransform& t, const PhotonState& s);

// compose(after, before) applies `before` first.
ModeTransform compose(const ModeTransform& after, const ModeTransform& before);

// Dense matrix M with M[j,k] = t[basis[j], basis[k]] and identity columns
// for untouched basis modes. Fails if a basis mode's column reaches outside
// the basis (the restriction would leak amplitude and stop matching the
// sparse path).
Eigen::MatrixXcd dense_matrix(const ModeTransform& t,
                              std::span<const Mode> basis);

// Rectangular restriction mapping amplitudes on in_basis to out_basis.
Eigen::MatrixXcd dense_map(const ModeTransform& t,
                           std::span<const Mode> out_basis,
                           std::span<const Mode> in_basis);

// Sorted set of modes a state supported on `input_modes` can occupy after t.
std::vector<Mode> image_modes(const ModeTransform& t,
                              std::span<const Mode> input_modes);

enum class BasisTag : std::uint8_t { timebin, dualrail, polarization };

std::string to_string(BasisTag tag);
BasisTag basis_tag_from_string(const std::string& s);

// 2x2 map on a declared qubit basis. Sub-unitary under loss.
struct QubitMatrix {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  BasisTag tag = BasisTag::timebin;

  // max |(U^dag U - I)_jk|
  double unitarity_residual() const;
};

// Fixed table: I, X, Y, Z, H, S = diag(1, i), T = diag(1, e^{i pi/4}).
QubitMatrix named_gate(const std::string& name);

template <typename Predicate>
ProjectionResult project(const PhotonState& s, Predicate&& keep,
                         bool renormalize) {
  std::map<Mode, Complex> kept;
  double prob = 0.0;
  for (const auto& [mode, amp] : s.amplitudes()) {
    if (keep(mode)) {
      kept.emplace(mode, amp);
      prob += std::norm(amp);
    }
  }
  if (renormalize) {
    if (prob <= kPruneThreshold * kPruneThreshold) {
      throw ZeroProbability("cannot renormalize a zero-probability projection");
    }
    const double scale = 1.0 / std::sqrt(prob);
    for (auto& [mode, amp] : kept) amp *= scale;
  }
  return {PhotonState(std::move(kept)), prob};
}

}  // namespace timebin

#endif
