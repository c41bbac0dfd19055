// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "unruh/mode_registry.hpp"
#include "unruh/rindler_expansion.hpp"

namespace unruh {

/// cos(theta)|000> + sin(theta)|111>.
struct GeneralizedGhz {
  double theta = std::numbers::pi / 4;
};

/// sin(theta)cos(phi)|100> + sin(theta)sin(phi)|010> + cos(theta)|001>.
struct GeneralizedW {
  double theta = 0.0;
  double phi = 0.0;
};

/// Equal-weight single-excitation state on N qubits.
struct SymmetricW {
  std::size_t n = 3;
};

/// (|0...0> + |1...1>) / sqrt 2 on N qubits.
struct GhzN {
  std::size_t n = 3;
};

/// |+>^{(x)N}.
struct PlusProduct {
  std::size_t n = 3;
};

/// (|W> + |Wbar>) / sqrt 2 on three qubits.
struct WWbar {};

/// (|000> + |100> + |101> + |111>) / 2.
struct Star {};

using Family = std::variant<GeneralizedGhz, GeneralizedW, SymmetricW, GhzN, PlusProduct, WWbar, Star>;

/// Angles of the symmetric W state inside the GeneralizedW family.
inline const double kSymmetricWTheta = std::acos(1.0 / std::numbers::sqrt3);
inline constexpr double kSymmetricWPhi = std::numbers::pi / 4;

/// Party whose acceleration the star-state "central" formulas describe.
inline constexpr PartyId kStarCentralParty = 2;

[[nodiscard]] inline std::size_t party_count(const Family& family) {
  return std::visit(
      [](const auto& f) -> std::size_t {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, SymmetricW> || std::is_same_v<F, GhzN> ||
                      std::is_same_v<F, PlusProduct>) {
          return f.n;
        } else {
          return 3;
        }
      },
      family);
}

[[nodiscard]] inline std::string family_name(const Family& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, GeneralizedGhz>) return "ghz";
        if constexpr (std::is_same_v<F, GeneralizedW>) return "w";
        if constexpr (std::is_same_v<F, SymmetricW>) return f.n == 3 ? "w-sym" : "w-n";
        if constexpr (std::is_same_v<F, GhzN>) return "ghz-n";
        if constexpr (std::is_same_v<F, PlusProduct>) return "plus";
        if constexpr (std::is_same_v<F, WWbar>) return "wwbar";
        if constexpr (std::is_same_v<F, Star>) return "star";
      },
      family);
}

struct StateSpec {
  StateSpec() = default;
  StateSpec(Family f, std::map<PartyId, AccelerationSpec> a = {},
            TruncationPolicy p = TruncationPolicy::tolerance(1e-10))
      : family(std::move(f)), accel(std::move(a)), policy(p) {}

  Family family = GeneralizedGhz{};
  std::map<PartyId, AccelerationSpec> accel;
  TruncationPolicy policy = TruncationPolicy::tolerance(1e-10);
};

/// One computational-basis term of an inertial state; bit k belongs to party k.
struct InertialTerm {
  std::vector<std::uint8_t> bits;
  double coefficient = 0.0;
};

namespace detail {

inline void check_angle(double value, const char* name) {
  if (!(value >= 0.0 && value < 2.0 * std::numbers::pi)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 2*pi)");
  }
}

inline void check_size(std::size_t n) {
  if (n < 2) throw std::invalid_argument("N must be at least 2");
  if (n > kMaxModes) throw std::invalid_argument("N exceeds the mode limit");
}

[[nodiscard]] inline std::vector<std::uint8_t> one_hot(std::size_t n, std::size_t k) {
  std::vector<std::uint8_t> bits(n, 0);
  bits[k] = 1;
  return bits;
}

}  // namespace detail

inline void validate(const StateSpec& spec) {
  std::visit(
      [](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, GeneralizedGhz>) {
          detail::check_angle(f.theta, "theta");
        } else if constexpr (std::is_same_v<F, GeneralizedW>) {
          detail::check_angle(f.theta, "theta");
          detail::check_angle(f.phi, "phi");
        } else if constexpr (std::is_same_v<F, SymmetricW> || std::is_same_v<F, GhzN> ||
                             std::is_same_v<F, PlusProduct>) {
          detail::check_size(f.n);
        }
      },
      spec.family);
  const std::size_t n = party_count(spec.family);
  for (const auto& [party, a] : spec.accel) {
    if (party < 0 || static_cast<std::size_t>(party) >= n) {
      throw std::invalid_argument("accelerated party " + std::to_string(party) + " out of range");
    }
    if (!(a.r >= 0.0) || !std::isfinite(a.r)) {
      throw std::invalid_argument("acceleration parameter r must be finite and >= 0");
    }
  }
}

/// Numeric representation limit: one mode per inertial party, two per
/// accelerated party, at most kMaxModes in total.
inline void check_mode_budget(const StateSpec& spec) {
  if (party_count(spec.family) + spec.accel.size() > kMaxModes) {
    throw std::invalid_argument("state needs more than " + std::to_string(kMaxModes) + " modes");
  }
}

/// The family's state with every party inertial.
[[nodiscard]] inline std::vector<InertialTerm> inertial_terms(const Family& family) {
  return std::visit(
      [](const auto& f) -> std::vector<InertialTerm> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, GeneralizedGhz>) {
          return {{{0, 0, 0}, std::cos(f.theta)}, {{1, 1, 1}, std::sin(f.theta)}};
        } else if constexpr (std::is_same_v<F, GeneralizedW>) {
          const double s = std::sin(f.theta);
          return {{{1, 0, 0}, s * std::cos(f.phi)},
                  {{0, 1, 0}, s * std::sin(f.phi)},
                  {{0, 0, 1}, std::cos(f.theta)}};
        } else if constexpr (std::is_same_v<F, SymmetricW>) {
          std::vector<InertialTerm> out;
          const double c = 1.0 / std::sqrt(static_cast<double>(f.n));
          for (std::size_t k = 0; k < f.n; ++k) out.push_back({detail::one_hot(f.n, k), c});
          return out;
        } else if constexpr (std::is_same_v<F, GhzN>) {
          const double c = 1.0 / std::numbers::sqrt2;
          return {{std::vector<std::uint8_t>(f.n, 0), c}, {std::vector<std::uint8_t>(f.n, 1), c}};
        } else if constexpr (std::is_same_v<F, PlusProduct>) {
          std::vector<InertialTerm> out;
          const double c = std::pow(0.5, 0.5 * static_cast<double>(f.n));
          for (std::size_t mask = 0; mask < (std::size_t{1} << f.n); ++mask) {
            std::vector<std::uint8_t> bits(f.n);
            for (std::size_t k = 0; k < f.n; ++k) bits[k] = (mask >> (f.n - 1 - k)) & 1U;
            out.push_back({std::move(bits), c});
          }
          return out;
        } else if constexpr (std::is_same_v<F, WWbar>) {
          const double c = 1.0 / std::sqrt(6.0);
          return {{{0, 0, 1}, c}, {{0, 1, 0}, c}, {{1, 0, 0}, c},
                  {{0, 1, 1}, c}, {{1, 0, 1}, c}, {{1, 1, 0}, c}};
        } else {
          return {{{0, 0, 0}, 0.5}, {{1, 0, 0}, 0.5}, {{1, 0, 1}, 0.5}, {{1, 1, 1}, 0.5}};
        }
      },
      family);
}

struct BuiltState {
  PureState state;
  std::map<PartyId, std::size_t> n_max;
  /// Upper bound on the norm deficit: the sum of per-party one-particle tails.
  double tail_bound = 0.0;
};

/// Builds the family's state, replacing each accelerated party's |0> and |1>
/// by the Rindler vacuum and one-particle expansions truncated at a common
/// per-party cutoff.
[[nodiscard]] inline BuiltState build(const StateSpec& spec) {
  validate(spec);
  check_mode_budget(spec);
  const std::size_t n = party_count(spec.family);

  BuiltState out;
  std::vector<PartyCutoff> cutoffs;
  // expansion[p][bit] lists (RindlerI, RindlerII, amplitude) for party p
  struct Component {
    OccupationLabel::value_type levels[2];
    double amplitude;
  };
  std::vector<std::array<std::vector<Component>, 2>> expansion(n);
  for (const auto& [party, a] : spec.accel) {
    const std::size_t n_max = resolve_n_max(a.r, spec.policy, Excitation::OneParticle);
    out.n_max[party] = n_max;
    out.tail_bound += tail_bound(a.r, n_max, Excitation::OneParticle);
    cutoffs.push_back({party, n_max});
    const PureState vac = rindler_vacuum_terms(a.r, n_max, party);
    const PureState one = rindler_one_particle_terms(a.r, n_max, party);
    for (const auto& t : vac.terms()) expansion[party][0].push_back({{t.label[0], t.label[1]}, t.value.real()});
    for (const auto& t : one.terms()) expansion[party][1].push_back({{t.label[0], t.label[1]}, t.value.real()});
  }
  ModeRegistry registry = make_registry(n, cutoffs);

  std::vector<std::size_t> accelerated;
  for (const auto& entry : spec.accel) accelerated.push_back(static_cast<std::size_t>(entry.first));

  std::vector<Amplitude> amplitudes;
  for (const auto& term : inertial_terms(spec.family)) {
    // odometer over the accelerated parties' expansion components
    std::vector<std::size_t> index(n, 0);
    bool done = false;
    while (!done) {
      OccupationLabel label;
      double value = term.coefficient;
      for (std::size_t p = 0; p < n; ++p) {
        const auto bit = term.bits[p];
        if (spec.accel.contains(static_cast<PartyId>(p))) {
          const Component& c = expansion[p][bit][index[p]];
          label.push_back(c.levels[0]);
          label.push_back(c.levels[1]);
          value *= c.amplitude;
        } else {
          label.push_back(bit);
        }
      }
      amplitudes.push_back({label, value});
      done = true;
      for (std::size_t k = accelerated.size(); k-- > 0;) {
        const std::size_t p = accelerated[k];
        if (++index[p] < expansion[p][term.bits[p]].size()) {
          done = false;
          break;
        }
        index[p] = 0;
      }
    }
  }
  out.state = PureState(std::move(registry), std::move(amplitudes));
  return out;
}

/// Visible modes of one party, as indices into the full registry.
struct Subsystem {
  PartyId party = 0;
  std::vector<std::size_t> modes;
};

/// One group per party: the inertial qubit, or the RindlerI mode of an
/// accelerated party. RindlerII modes are never visible.
[[nodiscard]] inline std::vector<Subsystem> party_subsystems(const ModeRegistry& registry) {
  std::vector<Subsystem> out;
  for (PartyId p : registry.parties()) {
    const auto kind = registry.is_accelerated(p) ? ModeKind::RindlerI : ModeKind::InertialQubit;
    out.push_back({p, {*registry.find(p, kind)}});
  }
  return out;
}

[[nodiscard]] inline std::vector<Subsystem> party_subsystems(const StateSpec& spec) {
  validate(spec);
  check_mode_budget(spec);
  std::vector<PartyCutoff> cutoffs;
  for (const auto& [party, a] : spec.accel) cutoffs.push_back({party, 0});
  return party_subsystems(make_registry(party_count(spec.family), cutoffs));
}

}  // namespace unruh
