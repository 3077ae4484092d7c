#include "timebin/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace timebin {

namespace {

void prune(std::map<Mode, Complex>& amps) {
  for (auto it = amps.begin(); it != amps.end();) {
    if (std::abs(it->second) < kPruneThreshold) {
      it = amps.erase(it);
    } else {
      ++it;
    }
  }
}

double squared_norm(const std::map<Mode, Complex>& amps) {
  double total = 0.0;
  for (const auto& [mode, amp] : amps) total += std::norm(amp);
  return total;
}

}  // namespace

char to_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

Pol pol_from_char(char c) {
  if (c == 'H') return Pol::H;
  if (c == 'V') return Pol::V;
  throw InvalidInput(std::string("unknown polarization '") + c + "'");
}

std::string to_string(const Mode& m) {
  return m.path + ":" + std::to_string(m.time_slot) + ":" + to_char(m.pol);
}

Mode parse_mode(const std::string& key) {
  const auto first = key.find(':');
  const auto second = key.rfind(':');
  if (first == std::string::npos || second == first ||
      second + 2 != key.size()) {
    throw InvalidInput("mode key must be path:slot:pol, got '" + key + "'");
  }
  Mode m;
  m.path = key.substr(0, first);
  try {
    m.time_slot = std::stoi(key.substr(first + 1, second - first - 1));
  } catch (const std::exception&) {
    throw InvalidInput("bad time slot in mode key '" + key + "'");
  }
  m.pol = pol_from_char(key[second + 1]);
  if (m.path.empty()) {
    throw InvalidInput("empty path in mode key '" + key + "'");
  }
  return m;
}

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, two_pi);
  if (r <= -std::numbers::pi) r = std::numbers::pi;
  return r;
}

PhotonState::PhotonState(std::map<Mode, Complex> amplitudes)
    : amps_(std::move(amplitudes)) {
  prune(amps_);
  const double norm2 = squared_norm(amps_);
  if (norm2 > 1.0 + kTolerance) {
    throw NormExceeded("state norm^2 " + std::to_string(norm2) +
                       " exceeds 1");
  }
}

PhotonState PhotonState::make(
    const std::vector<std::pair<Mode, Complex>>& entries) {
  std::map<Mode, Complex> amps;
  for (const auto& [mode, amp] : entries) {
    if (!amps.emplace(mode, amp).second) {
      throw DuplicateMode("duplicate mode " + to_string(mode));
    }
  }
  return PhotonState(std::move(amps));
}

Complex PhotonState::amplitude(const Mode& m) const {
  const auto it = amps_.find(m);
  return it == amps_.end() ? Complex(0.0, 0.0) : it->second;
}

double PhotonState::total_probability() const { return squared_norm(amps_); }

Complex inner_product(const PhotonState& a, const PhotonState& b) {
  Complex sum(0.0, 0.0);
  for (const auto& [mode, amp] : a.amplitudes()) {
    sum += std::conj(amp) * b.amplitude(mode);
  }
  return sum;
}

PhotonState relabel_path(const PhotonState& s, const std::string& from,
                         const std::string& to, int slot_shift) {
  std::map<Mode, Complex> amps;
  for (const auto& [mode, amp] : s.amplitudes()) {
    Mode m = mode;
    if (m.path == from) {
      m.path = to;
      m.time_slot += slot_shift;
    }
    if (!amps.emplace(m, amp).second) {
      throw DuplicateMode("relabel collides on mode " + to_string(m));
    }
  }
  return PhotonState(std::move(amps));
}

ModeTransform::ModeTransform(ColumnMap columns, int window)
    : cols_(std::move(columns)), window_(window) {
  if (window_ < 1) throw InvalidInput("window must be at least 1 slot");
  // Prune amplitudes but keep the column keys: an empty column still marks
  // the input mode as touched (its amplitude is discarded, not passed).
  for (auto& [in, col] : cols_) prune(col);
}

ModeTransform ModeTransform::identity(int window) {
  return ModeTransform(ColumnMap{}, window);
}

const ModeTransform::Column* ModeTransform::column(const Mode& m) const {
  const auto it = cols_.find(m);
  return it == cols_.end() ? nullptr : &it->second;
}

PhotonState apply(const ModeTransform& t, const PhotonState& s) {
  std::map<Mode, Complex> out;
  for (const auto& [mode, amp] : s.amplitudes()) {
    if (const ModeTransform::Column* col = t.column(mode)) {
      for (const auto& [out_mode, coeff] : *col) {
        out[out_mode] += coeff * amp;
      }
    } else {
      out[mode] += amp;
    }
  }
  prune(out);
  for (const auto& [mode, amp] : out) {
    if (mode.time_slot < 0 || mode.time_slot >= t.window()) {
      throw TimeWindowOverflow("mode " + to_string(mode) +
                               " leaves the time window [0, " +
                               std::to_string(t.window()) + ")");
    }
  }
  return PhotonState(std::move(out));
}

ModeTransform compose(const ModeTransform& after, const ModeTransform& before) {
  ModeTransform::ColumnMap cols;
  for (const auto& [in, col_before] : before.columns()) {
    ModeTransform::Column col;
    for (const auto& [mid, c1] : col_before) {
      if (const auto* col_after = after.column(mid)) {
        for (const auto& [out, c2] : *col_after) col[out] += c2 * c1;
      } else {
        col[mid] += c1;
      }
    }
    cols.emplace(in, std::move(col));
  }
  for (const auto& [in, col_after] : after.columns()) {
    cols.emplace(in, col_after);  // no-op where `before` already owns the key
  }
  return ModeTransform(std::move(cols),
                       std::min(before.window(), after.window()));
}

namespace {

std::map<Mode, std::size_t> index_basis(std::span<const Mode> basis) {
  std::map<Mode, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!index.emplace(basis[i], i).second) {
      throw BasisIncomplete("basis repeats mode " + to_string(basis[i]));
    }
  }
  return index;
}

}  // namespace

Eigen::MatrixXcd dense_matrix(const ModeTransform& t,
                              std::span<const Mode> basis) {
  return dense_map(t, basis, basis);
}

Eigen::MatrixXcd dense_map(const ModeTransform& t,
                           std::span<const Mode> out_basis,
                           std::span<const Mode> in_basis) {
  const auto out_index = index_basis(out_basis);
  index_basis(in_basis);  // reject duplicate inputs
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(out_basis.size()),
      static_cast<Eigen::Index>(in_basis.size()));
  for (std::size_t k = 0; k < in_basis.size(); ++k) {
    const Mode& in = in_basis[k];
    if (const auto* col = t.column(in)) {
      for (const auto& [out, coeff] : *col) {
        const auto it = out_index.find(out);
        if (it == out_index.end()) {
          throw BasisIncomplete("column of " + to_string(in) +
                                " reaches mode " + to_string(out) +
                                " outside the basis");
        }
        m(static_cast<Eigen::Index>(it->second),
          static_cast<Eigen::Index>(k)) = coeff;
      }
    } else {
      const auto it = out_index.find(in);
      if (it == out_index.end()) {
        throw BasisIncomplete("pass-through mode " + to_string(in) +
                              " missing from the output basis");
      }
      m(static_cast<Eigen::Index>(it->second), static_cast<Eigen::Index>(k)) =
          Complex(1.0, 0.0);
    }
  }
  return m;
}

std::vector<Mode> image_modes(const ModeTransform& t,
                              std::span<const Mode> input_modes) {
  std::set<Mode> out;
  for (const Mode& m : input_modes) {
    if (const auto* col = t.column(m)) {
      for (const auto& [out_mode, coeff] : *col) out.insert(out_mode);
    } else {
      out.insert(m);
    }
  }
  return {out.begin(), out.end()};
}

std::string to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::timebin: return "timebin";
    case BasisTag::dualrail: return "dualrail";
    case BasisTag::polarization: return "polarization";
  }
  return "timebin";
}

BasisTag basis_tag_from_string(const std::string& s) {
  if (s == "timebin") return BasisTag::timebin;
  if (s == "dualrail") return BasisTag::dualrail;
  if (s == "polarization") return BasisTag::polarization;
  throw InvalidInput("unknown basis tag '" + s + "'");
}

double QubitMatrix::unitarity_residual() const {
  const Eigen::Matrix2cd r = m.adjoint() * m - Eigen::Matrix2cd::Identity();
  return r.cwiseAbs().maxCoeff();
}

QubitMatrix named_gate(const std::string& name) {
  using std::numbers::pi;
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m;
  if (name == "I") {
    m = Eigen::Matrix2cd::Identity();
  } else if (name == "X") {
    m << 0, 1, 1, 0;
  } else if (name == "Y") {
    m << 0, -i, i, 0;
  } else if (name == "Z") {
    m << 1, 0, 0, -1;
  } else if (name == "H") {
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
  } else if (name == "S") {
    m << 1, 0, 0, i;
  } else if (name == "T") {
    m << 1, 0, 0, std::exp(i * (pi / 4.0));
  } else {
    throw InvalidInput("unknown gate name '" + name +
                       "' (expected one of I X Y Z H S T)");
  }
  return QubitMatrix{m, BasisTag::timebin};
}

}  // namespace timebin
