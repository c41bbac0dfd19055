// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unruh/mode_registry.hpp"
#include "unruh/summation.hpp"

namespace unruh {

/// Off-diagonal entries below this fraction of the trace are dropped.
inline constexpr double kDustFraction = 1e-16;

/// One stored element rho[row, col] with row <= col, indices in the
/// mixed-radix basis of the matrix's modes (last mode fastest).
struct DensityEntry {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  Complex value;
};

namespace detail {

[[nodiscard]] inline std::vector<std::uint64_t> strides_for(std::span<const Mode> modes) {
  std::vector<std::uint64_t> strides(modes.size());
  std::uint64_t s = 1;
  for (std::size_t i = modes.size(); i-- > 0;) {
    strides[i] = s;
    if (modes[i].dim != 0 && s > std::numeric_limits<std::uint64_t>::max() / modes[i].dim) {
      throw std::overflow_error("basis dimension does not fit in 64 bits");
    }
    s *= modes[i].dim;
  }
  return strides;
}

[[nodiscard]] inline bool entry_less(const DensityEntry& a, const DensityEntry& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace detail

/// Hermitian matrix over the occupation basis of `modes`, storing the
/// diagonal and upper triangle sparsely, sorted by (row, col).
class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Entries may arrive in any order and with duplicates; lower-triangle
  /// entries are conjugated into the upper triangle.
  DensityMatrix(std::vector<Mode> modes, std::vector<DensityEntry> entries)
      : modes_(std::move(modes)), strides_(detail::strides_for(modes_)) {
    if (modes_.empty()) throw std::invalid_argument("density matrix needs at least one mode");
    dimension_ = strides_.front() * modes_.front().dim;
    for (auto& e : entries) {
      if (e.row >= dimension_ || e.col >= dimension_) {
        throw std::out_of_range("density entry outside the basis");
      }
      if (e.row > e.col) e = {e.col, e.row, std::conj(e.value)};
    }
    canonicalize(std::move(entries));
  }

  [[nodiscard]] std::span<const Mode> modes() const { return modes_; }
  [[nodiscard]] std::uint64_t dimension() const { return dimension_; }
  [[nodiscard]] std::span<const DensityEntry> entries() const { return entries_; }
  [[nodiscard]] std::size_t nnz() const { return entries_.size(); }

  [[nodiscard]] std::uint64_t index_of(const OccupationLabel& label) const {
    if (label.size() != modes_.size()) throw std::invalid_argument("label width does not match");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (label[i] >= modes_[i].dim) throw std::out_of_range("occupation above mode dimension");
      idx += label[i] * strides_[i];
    }
    return idx;
  }

  [[nodiscard]] OccupationLabel label_of(std::uint64_t index) const {
    if (index >= dimension_) throw std::out_of_range("basis index out of range");
    OccupationLabel label;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      label.push_back(static_cast<OccupationLabel::value_type>(index / strides_[i]));
      index %= strides_[i];
    }
    return label;
  }

  /// Occupation of mode `m` within basis index `index`.
  [[nodiscard]] std::uint64_t digit(std::uint64_t index, std::size_t m) const {
    return (index / strides_[m]) % modes_[m].dim;
  }

  [[nodiscard]] Complex at(std::uint64_t row, std::uint64_t col) const {
    const bool swap = row > col;
    const DensityEntry key{swap ? col : row, swap ? row : col, {}};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key, detail::entry_less);
    if (it == entries_.end() || it->row != key.row || it->col != key.col) return {0.0, 0.0};
    return swap ? std::conj(it->value) : it->value;
  }

  [[nodiscard]] Complex at(const OccupationLabel& row, const OccupationLabel& col) const {
    return at(index_of(row), index_of(col));
  }

  [[nodiscard]] double trace() const {
    CompensatedSum<double> acc;
    for (const auto& e : entries_) {
      if (e.row == e.col) acc += e.value.real();
    }
    return acc.value();
  }

 private:
  void canonicalize(std::vector<DensityEntry> entries) {
    std::sort(entries.begin(), entries.end(), detail::entry_less);
    // merge duplicates in place
    std::size_t w = 0;
    CompensatedSum<double> trace;
    for (std::size_t i = 0; i < entries.size();) {
      CompensatedComplexSum<double> acc;
      std::size_t j = i;
      for (; j < entries.size() && entries[j].row == entries[i].row &&
             entries[j].col == entries[i].col;
           ++j) {
        acc += entries[j].value;
      }
      DensityEntry e{entries[i].row, entries[i].col, acc.value()};
      if (e.row == e.col) {
        e.value = {e.value.real(), 0.0};
        trace += e.value.real();
      }
      entries[w++] = e;
      i = j;
    }
    entries.resize(w);
    const double floor = kDustFraction * std::abs(trace.value());
    std::erase_if(entries, [&](const DensityEntry& e) {
      return e.row != e.col && std::abs(e.value) < floor;
    });
    entries.shrink_to_fit();
    entries_ = std::move(entries);
  }

  std::vector<Mode> modes_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t dimension_ = 0;
  std::vector<DensityEntry> entries_;
};

/// Reduced density matrix of `state` on the modes listed in `keep`
/// (registry indices), tracing out every other mode.
///
/// Amplitudes are grouped by their traced-out occupations h; each group v_h
/// contributes v_h v_h^dagger, so the cost scales with the sum of squared
/// group sizes rather than the visible dimension.
[[nodiscard]] inline DensityMatrix reduce(const PureState& state, std::span<const std::size_t> keep) {
  const ModeRegistry& reg = state.registry();
  if (keep.empty()) throw std::invalid_argument("reduce: keep at least one mode");
  std::vector<bool> kept(reg.size(), false);
  for (std::size_t m : keep) {
    if (m >= reg.size()) throw std::invalid_argument("reduce: mode " + std::to_string(m) + " not in registry");
    if (kept[m]) throw std::invalid_argument("reduce: mode listed twice");
    kept[m] = true;
  }
  std::vector<std::size_t> visible(keep.begin(), keep.end());
  std::sort(visible.begin(), visible.end());
  std::vector<std::size_t> hidden;
  for (std::size_t m = 0; m < reg.size(); ++m) {
    if (!kept[m]) hidden.push_back(m);
  }

  std::vector<Mode> visible_modes;
  for (std::size_t m : visible) visible_modes.push_back(reg[m]);
  std::vector<Mode> hidden_modes;
  for (std::size_t m : hidden) hidden_modes.push_back(reg[m]);
  const auto vstride = detail::strides_for(visible_modes);
  const auto hstride = detail::strides_for(hidden_modes);

  struct Keyed {
    std::uint64_t hidden;
    std::uint64_t visible;
    Complex value;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(state.nnz());
  for (const auto& t : state.terms()) {
    std::uint64_t v = 0;
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < visible.size(); ++i) v += t.label[visible[i]] * vstride[i];
    for (std::size_t i = 0; i < hidden.size(); ++i) h += t.label[hidden[i]] * hstride[i];
    keyed.push_back({h, v, t.value});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return a.hidden != b.hidden ? a.hidden < b.hidden : a.visible < b.visible;
  });

  std::size_t total = 0;
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].hidden == keyed[i].hidden) ++j;
    const std::size_t g = j - i;
    total += g * (g + 1) / 2;
    i = j;
  }
  std::vector<DensityEntry> entries;
  entries.reserve(total);
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].hidden == keyed[i].hidden) ++j;
    for (std::size_t a = i; a < j; ++a) {
      for (std::size_t b = a; b < j; ++b) {
        entries.push_back({keyed[a].visible, keyed[b].visible, keyed[a].value * std::conj(keyed[b].value)});
      }
    }
    i = j;
  }
  return DensityMatrix(std::move(visible_modes), std::move(entries));
}

[[nodiscard]] inline DensityMatrix reduce(const PureState& state, std::initializer_list<std::size_t> keep) {
  return reduce(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Density matrix on every mode except RindlerII.
[[nodiscard]] inline DensityMatrix reduce_accessible(const PureState& state) {
  const auto keep = state.registry().accessible_modes();
  return reduce(state, keep);
}

/// Partial trace over the listed modes (indices into rho.modes()).
[[nodiscard]] inline DensityMatrix trace_out_modes(const DensityMatrix& rho,
                                                   std::span<const std::size_t> drop) {
  const auto modes = rho.modes();
  std::vector<bool> dropped(modes.size(), false);
  for (std::size_t m : drop) {
    if (m >= modes.size()) throw std::invalid_argument("trace_out_modes: mode out of range");
    dropped[m] = true;
  }
  std::vector<std::size_t> kept;
  std::vector<Mode> kept_modes;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (!dropped[m]) {
      kept.push_back(m);
      kept_modes.push_back(modes[m]);
    }
  }
  if (kept.empty()) throw std::invalid_argument("trace_out_modes: nothing left");
  const auto stride = detail::strides_for(kept_modes);

  std::vector<DensityEntry> out;
  for (const auto& e : rho.entries()) {
    bool matches = true;
    for (std::size_t m = 0; m < modes.size() && matches; ++m) {
      if (dropped[m] && rho.digit(e.row, m) != rho.digit(e.col, m)) matches = false;
    }
    if (!matches) continue;
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      row += rho.digit(e.row, kept[i]) * stride[i];
      col += rho.digit(e.col, kept[i]) * stride[i];
    }
    out.push_back({row, col, e.value});
  }
  return DensityMatrix(std::move(kept_modes), std::move(out));
}

/// Mode indices of `rho` owned by the given parties.
[[nodiscard]] inline std::vector<std::size_t> modes_of_parties(const DensityMatrix& rho,
                                                               std::span<const PartyId> parties) {
  std::vector<std::size_t> out;
  for (PartyId p : parties) {
    bool found = false;
    for (std::size_t m = 0; m < rho.modes().size(); ++m) {
      if (rho.modes()[m].party == p) {
        out.push_back(m);
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("unknown party " + std::to_string(p));
  }
  return out;
}

[[nodiscard]] inline DensityMatrix trace_out_parties(const DensityMatrix& rho,
                                                     std::span<const PartyId> parties) {
  const auto drop = modes_of_parties(rho, parties);
  return trace_out_modes(rho, drop);
}

[[nodiscard]] inline DensityMatrix trace_out_parties(const DensityMatrix& rho,
                                                     std::initializer_list<PartyId> parties) {
  return trace_out_parties(rho, std::span<const PartyId>(parties.begin(), parties.size()));
}

/// Diagonal part of rho.
[[nodiscard]] inline DensityMatrix decohere(const DensityMatrix& rho) {
  std::vector<DensityEntry> diag;
  for (const auto& e : rho.entries()) {
    if (e.row == e.col) diag.push_back(e);
  }
  return DensityMatrix({rho.modes().begin(), rho.modes().end()}, std::move(diag));
}

/// Groups of mode indices, one per party, in ascending party order.
[[nodiscard]] inline std::vector<std::vector<std::size_t>> party_groups(const DensityMatrix& rho) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<PartyId> seen;
  for (std::size_t m = 0; m < rho.modes().size(); ++m) {
    const PartyId p = rho.modes()[m].party;
    auto it = std::find(seen.begin(), seen.end(), p);
    if (it == seen.end()) {
      seen.push_back(p);
      groups.push_back({m});
    } else {
      groups[static_cast<std::size_t>(it - seen.begin())].push_back(m);
    }
  }
  return groups;
}

namespace detail {

inline void check_partition(const DensityMatrix& rho, std::span<const std::vector<std::size_t>> subsystems) {
  std::vector<int> count(rho.modes().size(), 0);
  for (const auto& group : subsystems) {
    if (group.empty()) throw std::invalid_argument("empty subsystem");
    for (std::size_t m : group) {
      if (m >= count.size()) throw std::invalid_argument("subsystem mode out of range");
      ++count[m];
    }
  }
  for (int c : count) {
    if (c != 1) throw std::invalid_argument("subsystems do not partition the modes");
  }
}

}  // namespace detail

/// Reduced state on one subsystem.
[[nodiscard]] inline DensityMatrix marginal(const DensityMatrix& rho, std::span<const std::size_t> group) {
  std::vector<std::size_t> drop;
  for (std::size_t m = 0; m < rho.modes().size(); ++m) {
    if (std::find(group.begin(), group.end(), m) == group.end()) drop.push_back(m);
  }
  if (drop.empty()) return rho;
  return trace_out_modes(rho, drop);
}

[[nodiscard]] inline std::vector<DensityMatrix> marginals(const DensityMatrix& rho,
                                                          std::span<const std::vector<std::size_t>> subsystems) {
  detail::check_partition(rho, subsystems);
  std::vector<DensityMatrix> out;
  for (const auto& group : subsystems) out.push_back(marginal(rho, group));
  return out;
}

/// Full (both triangles) entry list of a Hermitian matrix.
[[nodiscard]] inline std::vector<DensityEntry> full_entries(const DensityMatrix& rho) {
  std::vector<DensityEntry> out;
  out.reserve(2 * rho.nnz());
  for (const auto& e : rho.entries()) {
    out.push_back(e);
    if (e.row != e.col) out.push_back({e.col, e.row, std::conj(e.value)});
  }
  return out;
}

/// Tensor product of the subsystem marginals, laid out in rho's mode order.
[[nodiscard]] inline DensityMatrix marginal_product(const DensityMatrix& rho,
                                                    std::span<const std::vector<std::size_t>> subsystems) {
  const auto parts = marginals(rho, subsystems);
  std::vector<Mode> modes(rho.modes().begin(), rho.modes().end());
  const auto stride = detail::strides_for(modes);

  // offset[k][i]: position in rho's basis of local index i of subsystem k
  std::vector<std::vector<std::size_t>> sorted_groups;
  std::vector<std::vector<DensityEntry>> local;
  std::vector<std::vector<std::uint64_t>> offset;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    std::vector<std::size_t> group = subsystems[k];
    std::sort(group.begin(), group.end());
    const DensityMatrix& part = parts[k];
    std::vector<std::uint64_t> off(part.dimension());
    for (std::uint64_t i = 0; i < part.dimension(); ++i) {
      std::uint64_t g = 0;
      for (std::size_t j = 0; j < group.size(); ++j) g += part.digit(i, j) * stride[group[j]];
      off[i] = g;
    }
    offset.push_back(std::move(off));
    local.push_back(full_entries(part));
  }

  std::vector<DensityEntry> out;
  std::vector<std::size_t> index(parts.size(), 0);
  for (const auto& l : local) {
    if (l.empty()) return DensityMatrix(std::move(modes), {});
  }
  for (;;) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    Complex value = 1.0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const DensityEntry& e = local[k][index[k]];
      row += offset[k][e.row];
      col += offset[k][e.col];
      value *= e.value;
    }
    if (row <= col) out.push_back({row, col, value});
    std::size_t k = parts.size();
    while (k > 0) {
      --k;
      if (++index[k] < local[k].size()) break;
      index[k] = 0;
      if (k == 0) return DensityMatrix(std::move(modes), std::move(out));
    }
  }
}

}  // namespace unruh
