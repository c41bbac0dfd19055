// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unruh/summation.hpp"

namespace unruh {

/// Fixed capacity of an occupation label. Three accelerated parties plus a
/// handful of inertial qubits fit comfortably.
inline constexpr std::size_t kMaxModes = 12;

/// Amplitudes smaller than this are never stored.
inline constexpr double kAmplitudeFloor = 1e-300;

using PartyId = int;
using Complex = std::complex<double>;

enum class ModeKind : std::uint8_t { InertialQubit, RindlerI, RindlerII };

[[nodiscard]] constexpr std::string_view to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::InertialQubit: return "inertial";
    case ModeKind::RindlerI: return "rindler-I";
    case ModeKind::RindlerII: return "rindler-II";
  }
  return "?";
}

struct Mode {
  ModeKind kind = ModeKind::InertialQubit;
  PartyId party = 0;
  std::uint32_t dim = 2;

  friend bool operator==(const Mode&, const Mode&) = default;
};

/// Occupation numbers, one per mode, stored inline.
class OccupationLabel {
 public:
  using value_type = std::uint32_t;

  constexpr OccupationLabel() = default;

  constexpr OccupationLabel(std::initializer_list<value_type> occupations)
      : OccupationLabel(std::span<const value_type>(occupations.begin(),
                                                    occupations.size())) {}

  constexpr explicit OccupationLabel(std::span<const value_type> occupations) {
    if (occupations.size() > kMaxModes) {
      throw std::invalid_argument("occupation label wider than kMaxModes");
    }
    std::copy(occupations.begin(), occupations.end(), occ_.begin());
    size_ = static_cast<std::uint8_t>(occupations.size());
  }

  [[nodiscard]] constexpr std::size_t size() const { return size_; }
  [[nodiscard]] constexpr value_type operator[](std::size_t i) const { return occ_[i]; }
  constexpr value_type& operator[](std::size_t i) { return occ_[i]; }

  [[nodiscard]] constexpr const value_type* begin() const { return occ_.data(); }
  [[nodiscard]] constexpr const value_type* end() const { return occ_.data() + size_; }

  constexpr void push_back(value_type occupation) {
    if (size_ == kMaxModes) {
      throw std::invalid_argument("occupation label wider than kMaxModes");
    }
    occ_[size_++] = occupation;
  }

  [[nodiscard]] friend constexpr OccupationLabel concat(const OccupationLabel& a,
                                                        const OccupationLabel& b) {
    OccupationLabel out = a;
    for (auto v : b) out.push_back(v);
    return out;
  }

  friend constexpr bool operator==(const OccupationLabel& a, const OccupationLabel& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

  friend constexpr std::strong_ordering operator<=>(const OccupationLabel& a,
                                                    const OccupationLabel& b) {
    const auto n = std::min(a.size_, b.size_);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.occ_[i] != b.occ_[i]) return a.occ_[i] <=> b.occ_[i];
    }
    return a.size_ <=> b.size_;
  }

  [[nodiscard]] std::size_t hash() const noexcept {
    // FNV-1a over the used entries, then a final avalanche.
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : *this) {
      h ^= v;
      h *= 1099511628211ULL;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }

  [[nodiscard]] std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < size_; ++i) {
      if (i) s += ',';
      s += std::to_string(occ_[i]);
    }
    return s + ")";
  }

 private:
  std::array<value_type, kMaxModes> occ_{};
  std::uint8_t size_ = 0;
};

/// Ordered layout of modes with party roles.
///
/// Invariants (checked on construction): inertial modes have dimension 2;
/// an accelerated party owns a RindlerI mode immediately followed by a
/// RindlerII mode of equal dimension >= 2; parties appear in ascending id.
class ModeRegistry {
 public:
  ModeRegistry() = default;

  explicit ModeRegistry(std::vector<Mode> modes) : modes_(std::move(modes)) {
    validate();
  }

  [[nodiscard]] const std::vector<Mode>& modes() const { return modes_; }
  [[nodiscard]] std::size_t size() const { return modes_.size(); }
  [[nodiscard]] const Mode& operator[](std::size_t i) const { return modes_[i]; }
  [[nodiscard]] bool empty() const { return modes_.empty(); }

  /// Party ids in ascending order.
  [[nodiscard]] std::vector<PartyId> parties() const {
    std::vector<PartyId> out;
    for (const auto& m : modes_) {
      if (out.empty() || out.back() != m.party) out.push_back(m.party);
    }
    return out;
  }

  [[nodiscard]] std::size_t party_count() const { return parties().size(); }

  [[nodiscard]] bool has_party(PartyId party) const {
    return std::any_of(modes_.begin(), modes_.end(),
                       [&](const Mode& m) { return m.party == party; });
  }

  [[nodiscard]] bool is_accelerated(PartyId party) const {
    return find(party, ModeKind::RindlerI).has_value();
  }

  [[nodiscard]] std::optional<std::size_t> find(PartyId party, ModeKind kind) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (modes_[i].party == party && modes_[i].kind == kind) return i;
    }
    return std::nullopt;
  }

  /// Indices of every mode except RindlerII, in registry order.
  [[nodiscard]] std::vector<std::size_t> accessible_modes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (modes_[i].kind != ModeKind::RindlerII) out.push_back(i);
    }
    return out;
  }

  [[nodiscard]] bool admits(const OccupationLabel& label) const {
    if (label.size() != modes_.size()) return false;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (label[i] >= modes_[i].dim) return false;
    }
    return true;
  }

  friend bool operator==(const ModeRegistry&, const ModeRegistry&) = default;

 private:
  void validate() const {
    if (modes_.empty()) throw std::invalid_argument("registry needs at least one mode");
    if (modes_.size() > kMaxModes) {
      throw std::invalid_argument("registry has " + std::to_string(modes_.size()) +
                                  " modes; at most " + std::to_string(kMaxModes) +
                                  " are supported");
    }
    std::size_t i = 0;
    std::optional<PartyId> previous;
    while (i < modes_.size()) {
      const Mode& m = modes_[i];
      if (m.party < 0) throw std::invalid_argument("negative party id");
      if (previous && m.party <= *previous) {
        throw std::invalid_argument("registry modes not in canonical party order");
      }
      previous = m.party;
      switch (m.kind) {
        case ModeKind::InertialQubit:
          if (m.dim != 2) throw std::invalid_argument("inertial mode must have dimension 2");
          i += 1;
          break;
        case ModeKind::RindlerI: {
          if (i + 1 >= modes_.size() || modes_[i + 1].kind != ModeKind::RindlerII ||
              modes_[i + 1].party != m.party) {
            throw std::invalid_argument("RindlerI mode must be followed by its RindlerII partner");
          }
          if (m.dim < 2 || modes_[i + 1].dim != m.dim) {
            throw std::invalid_argument("Rindler pair dimensions must be equal and >= 2");
          }
          i += 2;
          break;
        }
        case ModeKind::RindlerII:
          throw std::invalid_argument("RindlerII mode without preceding RindlerI");
      }
    }
  }

  std::vector<Mode> modes_;
};

struct PartyCutoff {
  PartyId party = 0;
  std::size_t n_max = 0;
};

/// Canonical registry for parties 0..parties-1. Accelerated parties get a
/// RindlerI/RindlerII pair of dimension n_max+2.
[[nodiscard]] inline ModeRegistry make_registry(std::size_t parties,
                                                std::span<const PartyCutoff> accelerated = {}) {
  if (parties == 0) throw std::invalid_argument("registry needs at least one party");
  std::vector<std::optional<std::size_t>> cutoff(parties);
  for (const auto& a : accelerated) {
    if (a.party < 0 || static_cast<std::size_t>(a.party) >= parties) {
      throw std::invalid_argument("accelerated party " + std::to_string(a.party) + " out of range");
    }
    if (cutoff[a.party]) {
      throw std::invalid_argument("party " + std::to_string(a.party) + " listed twice");
    }
    if (a.n_max + 2 > std::numeric_limits<std::uint32_t>::max()) {
      throw std::invalid_argument("n_max too large for an occupation label");
    }
    cutoff[a.party] = a.n_max;
  }
  std::vector<Mode> modes;
  for (std::size_t p = 0; p < parties; ++p) {
    const auto id = static_cast<PartyId>(p);
    if (cutoff[p]) {
      const auto dim = static_cast<std::uint32_t>(*cutoff[p] + 2);
      modes.push_back({ModeKind::RindlerI, id, dim});
      modes.push_back({ModeKind::RindlerII, id, dim});
    } else {
      modes.push_back({ModeKind::InertialQubit, id, 2});
    }
  }
  return ModeRegistry(std::move(modes));
}

[[nodiscard]] inline ModeRegistry make_registry(
    std::size_t parties, std::initializer_list<PartyCutoff> accelerated) {
  return make_registry(parties, std::span<const PartyCutoff>(accelerated.begin(), accelerated.size()));
}

struct Amplitude {
  OccupationLabel label;
  Complex value;
};

/// Sparse pure state: amplitudes sorted by label, no duplicates, none below
/// kAmplitudeFloor in magnitude. Immutable once constructed.
class PureState {
 public:
  PureState() = default;

  PureState(ModeRegistry registry, std::vector<Amplitude> terms)
      : registry_(std::move(registry)), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (!registry_.admits(t.label)) {
        throw std::invalid_argument("label " + t.label.to_string() +
                                    " violates the registry's mode dimensions");
      }
    }
    normalize_storage();
  }

  [[nodiscard]] const ModeRegistry& registry() const { return registry_; }
  [[nodiscard]] std::span<const Amplitude> terms() const { return terms_; }
  [[nodiscard]] std::size_t nnz() const { return terms_.size(); }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  [[nodiscard]] Complex amplitude(const OccupationLabel& label) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), label,
                               [](const Amplitude& a, const OccupationLabel& l) { return a.label < l; });
    if (it != terms_.end() && it->label == label) return it->value;
    return {0.0, 0.0};
  }

  [[nodiscard]] PureState scaled(Complex factor) const {
    std::vector<Amplitude> out = terms_;
    for (auto& t : out) t.value *= factor;
    return PureState(registry_, std::move(out));
  }

 private:
  void normalize_storage() {
    auto by_label = [](const Amplitude& a, const Amplitude& b) { return a.label < b.label; };
    if (!std::is_sorted(terms_.begin(), terms_.end(), by_label)) {
      std::stable_sort(terms_.begin(), terms_.end(), by_label);
    }
    std::vector<Amplitude> merged;
    merged.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size();) {
      std::size_t j = i + 1;
      Complex v = terms_[i].value;
      if (j < terms_.size() && terms_[j].label == terms_[i].label) {
        CompensatedComplexSum<double> acc;
        acc += v;
        for (; j < terms_.size() && terms_[j].label == terms_[i].label; ++j) acc += terms_[j].value;
        v = acc.value();
      }
      if (std::abs(v) >= kAmplitudeFloor) merged.push_back({terms_[i].label, v});
      i = j;
    }
    terms_ = std::move(merged);
  }

  ModeRegistry registry_;
  std::vector<Amplitude> terms_;
};

/// Single computational-basis ket.
[[nodiscard]] inline PureState basis_state(ModeRegistry registry, const OccupationLabel& label,
                                           Complex value = 1.0) {
  return PureState(std::move(registry), {{label, value}});
}

/// alpha|0> + beta|1> on one inertial qubit owned by `party`.
[[nodiscard]] inline PureState qubit_state(PartyId party, Complex alpha, Complex beta) {
  return PureState(ModeRegistry({{ModeKind::InertialQubit, party, 2}}), {{{0}, alpha}, {{1}, beta}});
}

/// Tensor product. Party ids must not overlap; the result is in canonical
/// mode order, so operands may be given in any party order.
[[nodiscard]] inline PureState tensor(const PureState& a, const PureState& b) {
  for (PartyId p : b.registry().parties()) {
    if (a.registry().has_party(p)) {
      throw std::invalid_argument("tensor: party " + std::to_string(p) + " present in both operands");
    }
  }
  std::vector<Mode> modes = a.registry().modes();
  modes.insert(modes.end(), b.registry().modes().begin(), b.registry().modes().end());

  // Stable sort by party keeps each RindlerI/RindlerII pair adjacent.
  std::vector<std::size_t> order(modes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return modes[x].party < modes[y].party; });
  const bool identity = std::is_sorted(order.begin(), order.end());

  std::vector<Mode> canonical(modes.size());
  for (std::size_t i = 0; i < order.size(); ++i) canonical[i] = modes[order[i]];

  std::vector<Amplitude> terms;
  terms.reserve(a.nnz() * b.nnz());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      OccupationLabel joined = concat(ta.label, tb.label);
      if (!identity) {
        OccupationLabel permuted;
        for (std::size_t i = 0; i < order.size(); ++i) permuted.push_back(joined[order[i]]);
        joined = permuted;
      }
      terms.push_back({joined, ta.value * tb.value});
    }
  }
  return PureState(ModeRegistry(std::move(canonical)), std::move(terms));
}

/// Sum of two states over the same registry.
[[nodiscard]] inline PureState add(const PureState& a, const PureState& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (!(a.registry() == b.registry())) throw std::invalid_argument("add: registries differ");
  std::vector<Amplitude> terms;
  terms.reserve(a.nnz() + b.nnz());
  std::merge(a.terms().begin(), a.terms().end(), b.terms().begin(), b.terms().end(),
             std::back_inserter(terms),
             [](const Amplitude& x, const Amplitude& y) { return x.label < y.label; });
  return PureState(a.registry(), std::move(terms));
}

/// Sum of squared amplitude magnitudes, compensated.
[[nodiscard]] inline double norm_sq(const PureState& s) {
  CompensatedSum<double> acc;
  for (const auto& t : s.terms()) acc += std::norm(t.value);
  return acc.value();
}

}  // namespace unruh

template <>
struct std::hash<unruh::OccupationLabel> {
  std::size_t operator()(const unruh::OccupationLabel& l) const noexcept { return l.hash(); }
};
