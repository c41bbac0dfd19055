// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "unruh/errors.hpp"
#include "unruh/mode_registry.hpp"

namespace unruh {

inline constexpr std::size_t kDefaultNMaxCap = 1'000'000;

/// r = artanh(exp(-pi*Omega)), i.e. cosh r = (1 - exp(-2 pi Omega))^{-1/2}.
[[nodiscard]] inline double r_from_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::domain_error("r_from_omega: Omega must be positive and finite");
  }
  // With delta = 1 - tanh r, artanh = log((2 - delta) / delta) / 2.
  const double delta = -std::expm1(-std::numbers::pi * omega);
  if (delta >= 1.0) return 0.0;
  return 0.5 * (std::log(2.0 - delta) - std::log(delta));
}

/// Squeezing parameter of one accelerated party.
struct AccelerationSpec {
  double r = 0.0;
  std::optional<double> omega;

  [[nodiscard]] static AccelerationSpec from_r(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("acceleration parameter r must be finite and >= 0");
    }
    return {r, std::nullopt};
  }

  [[nodiscard]] static AccelerationSpec from_omega(double omega) {
    return {r_from_omega(omega), omega};
  }
};

/// Either a fixed cutoff n_max, or the smallest n_max whose omitted
/// probability is at most tail_tol, never exceeding `cap`.
class TruncationPolicy {
 public:
  [[nodiscard]] static TruncationPolicy fixed(std::size_t n_max, std::size_t cap = kDefaultNMaxCap) {
    if (n_max > cap) throw std::invalid_argument("fixed n_max exceeds the cap");
    return TruncationPolicy(n_max, cap);
  }

  [[nodiscard]] static TruncationPolicy tolerance(double tail_tol, std::size_t cap = kDefaultNMaxCap) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
      throw std::invalid_argument("tail tolerance must lie in (0, 1)");
    }
    return TruncationPolicy(tail_tol, cap);
  }

  [[nodiscard]] bool is_fixed() const { return std::holds_alternative<std::size_t>(rule_); }
  [[nodiscard]] std::size_t n_max() const { return std::get<std::size_t>(rule_); }
  [[nodiscard]] double tail_tol() const { return std::get<double>(rule_); }
  [[nodiscard]] std::size_t cap() const { return cap_; }

 private:
  TruncationPolicy(std::variant<std::size_t, double> rule, std::size_t cap)
      : rule_(rule), cap_(cap) {}

  std::variant<std::size_t, double> rule_;
  std::size_t cap_;
};

enum class Excitation { Vacuum, OneParticle };

namespace detail {

/// log(tanh r) without cancellation at small or large r.
[[nodiscard]] inline double log_tanh(double r) {
  const double e = std::exp(-2.0 * r);
  if (r > 0.5) return -2.0 * std::atanh(e);
  return std::log(-std::expm1(-2.0 * r)) - std::log1p(e);
}

[[nodiscard]] inline double log_cosh(double r) {
  if (r < 20.0) return std::log(std::cosh(r));
  return r - std::numbers::ln2 + std::log1p(std::exp(-2.0 * r));
}

[[nodiscard]] inline double log_sinh(double r) {
  if (r < 20.0) return std::log(std::sinh(r));
  return r - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * r));
}

/// 1 / cosh^2 r, which is also 1 - tanh^2 r.
[[nodiscard]] inline double sech_sq(double r) {
  const double c = std::cosh(r);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

}  // namespace detail

/// Exact probability omitted by truncating the expansion after level n_max.
///
/// Vacuum: tanh^{2(n+1)} r. One particle: the complement of the
/// arithmetico-geometric partial sum, x^{n+1} (1 + (n+1)(1 - x)) with
/// x = tanh^2 r.
[[nodiscard]] inline double tail_bound(double r, std::size_t n_max, Excitation which) {
  if (r == 0.0) return 0.0;
  const double levels = static_cast<double>(n_max) + 1.0;
  const double geometric = std::exp(levels * 2.0 * detail::log_tanh(r));
  if (which == Excitation::Vacuum) return geometric;
  return geometric * (1.0 + levels * detail::sech_sq(r));
}

/// Cutoff selected by `policy` for one expansion of the given kind.
[[nodiscard]] inline std::size_t resolve_n_max(double r, const TruncationPolicy& policy,
                                               Excitation which) {
  if (policy.is_fixed()) return policy.n_max();
  if (r == 0.0) return 0;
  const double tol = policy.tail_tol();
  const double log_x = 2.0 * detail::log_tanh(r);
  if (!(log_x < 0.0)) throw TruncationCapExceeded(r, tol, policy.cap());
  const double estimate = std::ceil(std::log(tol) / log_x) - 1.0;
  if (!(estimate <= static_cast<double>(policy.cap()))) {
    throw TruncationCapExceeded(r, tol, policy.cap());
  }
  auto fits = [&](std::size_t n) { return tail_bound(r, n, which) <= tol; };
  std::size_t n = estimate > 0.0 ? static_cast<std::size_t>(estimate) : 0;
  while (n > 0 && fits(n - 1)) --n;
  if (!fits(n)) {
    // tail is strictly decreasing in n: bracket, then bisect
    std::size_t lo = n;
    std::size_t hi = n;
    for (std::size_t step = 1;; step *= 2) {
      hi = std::min(n + step, policy.cap());
      if (fits(hi)) break;
      if (hi == policy.cap()) throw TruncationCapExceeded(r, tol, policy.cap());
      lo = hi;
    }
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (fits(mid) ? hi : lo) = mid;
    }
    n = hi;
  }
  if (n > policy.cap()) throw TruncationCapExceeded(r, tol, policy.cap());
  return n;
}

/// Rindler pair registry for one accelerated party.
[[nodiscard]] inline ModeRegistry rindler_pair_registry(PartyId party, std::size_t n_max) {
  const auto dim = static_cast<std::uint32_t>(n_max + 2);
  return ModeRegistry({{ModeKind::RindlerI, party, dim}, {ModeKind::RindlerII, party, dim}});
}

/// Minkowski vacuum seen by the accelerated party: amplitudes
/// tanh^n r / cosh r on |n>_I |n>_II, n = 0..n_max.
[[nodiscard]] inline PureState rindler_vacuum_terms(double r, std::size_t n_max, PartyId party = 0) {
  std::vector<Amplitude> terms;
  if (r == 0.0) {
    terms.push_back({{0, 0}, 1.0});
  } else {
    const double log_t = detail::log_tanh(r);
    const double log_c = detail::log_cosh(r);
    terms.reserve(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
      const double amp = std::exp(static_cast<double>(n) * log_t - log_c);
      const auto k = static_cast<OccupationLabel::value_type>(n);
      terms.push_back({{k, k}, amp});
    }
  }
  return PureState(rindler_pair_registry(party, n_max), std::move(terms));
}

/// One Minkowski particle seen by the accelerated party: amplitudes
/// sqrt(n+1) tanh^n r / cosh^2 r on |n+1>_I |n>_II.
[[nodiscard]] inline PureState rindler_one_particle_terms(double r, std::size_t n_max,
                                                          PartyId party = 0) {
  std::vector<Amplitude> terms;
  if (r == 0.0) {
    terms.push_back({{1, 0}, 1.0});
  } else {
    const double log_t = detail::log_tanh(r);
    const double log_c = detail::log_cosh(r);
    terms.reserve(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
      const double nn = static_cast<double>(n);
      const double amp = std::sqrt(nn + 1.0) * std::exp(nn * log_t - 2.0 * log_c);
      const auto k = static_cast<OccupationLabel::value_type>(n);
      terms.push_back({{k + 1, k}, amp});
    }
  }
  return PureState(rindler_pair_registry(party, n_max), std::move(terms));
}

[[nodiscard]] inline PureState rindler_vacuum(double r, const TruncationPolicy& policy,
                                              PartyId party = 0) {
  if (!(r >= 0.0)) throw std::invalid_argument("rindler_vacuum: r must be >= 0");
  return rindler_vacuum_terms(r, resolve_n_max(r, policy, Excitation::Vacuum), party);
}

[[nodiscard]] inline PureState rindler_one_particle(double r, const TruncationPolicy& policy,
                                                    PartyId party = 0) {
  if (!(r >= 0.0)) throw std::invalid_argument("rindler_one_particle: r must be >= 0");
  return rindler_one_particle_terms(r, resolve_n_max(r, policy, Excitation::OneParticle), party);
}

}  // namespace unruh
