// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "unruh/polylog.hpp"
#include "unruh/state_builders.hpp"

namespace unruh {

/// Closed-form total, global and local coherence.
struct CoherenceTriple {
  double total = 0.0;
  double global = 0.0;
  double local = 0.0;
};

namespace detail {

[[nodiscard]] inline double kernel_product(std::span<const double> r) {
  double p = 1.0;
  for (double x : r) p *= kernel_f(x);
  return p;
}

}  // namespace detail

/// Generalized GHZ with 0, 1 or 2 accelerated parties:
/// |2 sin(theta) cos(theta)| prod f(r_k).
[[nodiscard]] inline double ghz_coherence(double theta, std::span<const double> r) {
  if (r.size() > 2) throw std::invalid_argument("ghz_coherence: at most two accelerated parties");
  return std::abs(2.0 * std::sin(theta) * std::cos(theta)) * detail::kernel_product(r);
}

[[nodiscard]] inline double ghz_coherence(double theta, std::initializer_list<double> r = {}) {
  return ghz_coherence(theta, std::span<const double>(r.begin(), r.size()));
}

/// Kernel factors of the three W-state parties; 1 for an inertial party.
struct WFactors {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

/// Pairwise l1 weights of the generalized W state. A pair flips the
/// excitation between two parties, so it picks up both parties' kernels.
struct WPairs {
  double ab = 0.0;
  double ac = 0.0;
  double bc = 0.0;
};

[[nodiscard]] inline WPairs w_pairs(double theta, double phi, const WFactors& f) {
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  return {std::abs(2.0 * st * st * sp * cp) * f.a * f.b,
          std::abs(2.0 * st * ct * cp) * f.a * f.c,
          std::abs(2.0 * st * ct * sp) * f.b * f.c};
}

/// Generalized W total coherence. With Charlie (r_c) accelerated this is
/// 2|st ct|(|sp| + |cp|) f + 2|st^2 sp cp|; with Bob (r_b) and Charlie both
/// accelerated the three pair terms carry f_b f_c, f_c and f_b.
[[nodiscard]] inline double w_coherence(double theta, double phi, std::optional<double> r_b = {},
                                        std::optional<double> r_c = {}) {
  const WFactors f{1.0, r_b ? kernel_f(*r_b) : 1.0, r_c ? kernel_f(*r_c) : 1.0};
  const WPairs p = w_pairs(theta, phi, f);
  return p.ab + p.ac + p.bc;
}

/// Coherence of the W two-party reduced state left after tracing out
/// `traced` (0 = Alice, 1 = Bob, 2 = Charlie).
[[nodiscard]] inline double w_reduced_coherence(double theta, double phi, PartyId traced,
                                                std::optional<double> r_b = {},
                                                std::optional<double> r_c = {}) {
  const WFactors f{1.0, r_b ? kernel_f(*r_b) : 1.0, r_c ? kernel_f(*r_c) : 1.0};
  const WPairs p = w_pairs(theta, phi, f);
  switch (traced) {
    case 0: return p.bc;
    case 1: return p.ac;
    case 2: return p.ab;
    default: throw std::invalid_argument("w_reduced_coherence: traced party must be 0, 1 or 2");
  }
}

/// rho_AC coherence with sin(phi) in place of cos(phi); differs from
/// w_reduced_coherence(..., 1, ...) unless |sin phi| = |cos phi|.
[[nodiscard]] inline double w_reduced_ac_sin_phi(double theta, double phi, double r_c) {
  return 2.0 * std::sin(theta) * std::cos(theta) * std::sin(phi) * kernel_f(r_c);
}

/// |+++> with 0, 1 or 2 accelerated parties: 7, 3 + 4f, 1 + 2f1 + 2f2 + 2f1f2.
[[nodiscard]] inline double separable_coherence(std::span<const double> r) {
  switch (r.size()) {
    case 0: return 7.0;
    case 1: return 3.0 + 4.0 * kernel_f(r[0]);
    case 2: {
      const double f1 = kernel_f(r[0]);
      const double f2 = kernel_f(r[1]);
      return 1.0 + 2.0 * f1 + 2.0 * f2 + 2.0 * f1 * f2;
    }
    default: throw std::invalid_argument("separable_coherence: at most two accelerated parties");
  }
}

[[nodiscard]] inline double separable_coherence(std::initializer_list<double> r = {}) {
  return separable_coherence(std::span<const double>(r.begin(), r.size()));
}

/// |+>^{(x)N} with the listed parties accelerated: prod(1 + O_k) - 1 where
/// O_k is 1 for an inertial qubit and f(r_k) otherwise.
[[nodiscard]] inline double plus_product_coherence(std::size_t n, std::span<const double> r) {
  if (r.size() > n) throw std::invalid_argument("plus_product_coherence: more accelerated parties than qubits");
  double p = std::pow(2.0, static_cast<double>(n - r.size()));
  for (double x : r) p *= 1.0 + kernel_f(x);
  return p - 1.0;
}

/// WWbar state, 0, 1 or 2 accelerated parties (the state is permutation
/// symmetric, so only the count matters).
[[nodiscard]] inline CoherenceTriple wwbar_coherence(std::span<const double> r) {
  switch (r.size()) {
    case 0: return {5.0, 37.0 / 27.0, 98.0 / 27.0};
    case 1: {
      const double f = kernel_f(r[0]);
      return {2.0 + 3.0 * f, 2.0 / 9.0 + 31.0 * f / 27.0, 16.0 / 9.0 + 50.0 * f / 27.0};
    }
    case 2: {
      const double f1 = kernel_f(r[0]);
      const double f2 = kernel_f(r[1]);
      const double ff = f1 * f2;
      return {4.0 / 6.0 + 8.0 * f1 / 6.0 + 8.0 * f2 / 6.0 + 10.0 * ff / 6.0,
              2.0 * f1 / 9.0 + 2.0 * f2 / 9.0 + 25.0 * ff / 27.0,
              2.0 / 3.0 + 10.0 * f1 / 9.0 + 10.0 * f2 / 9.0 + 20.0 * ff / 27.0};
    }
    default: throw std::invalid_argument("wwbar_coherence: at most two accelerated parties");
  }
}

[[nodiscard]] inline CoherenceTriple wwbar_coherence(std::initializer_list<double> r = {}) {
  return wwbar_coherence(std::span<const double>(r.begin(), r.size()));
}

enum class StarScenario { Inertial, Central, Peripheral, CentralPeripheral, TwoPeripheral };

/// Star state. r1 is the central party's parameter (or the first peripheral
/// for TwoPeripheral), r2 the peripheral one.
///
/// For CentralPeripheral, C_G = C_T - C_L = f1/4 - f2/4 + 5 f1 f2 / 8.
/// See star_global_central_peripheral_alt.
[[nodiscard]] inline CoherenceTriple star_coherence(StarScenario which, double r1 = 0.0, double r2 = 0.0) {
  switch (which) {
    case StarScenario::Inertial: return {3.0, 0.625, 2.375};
    case StarScenario::Central: {
      const double f = kernel_f(r1);
      return {1.0 + 2.0 * f, -0.25 + 7.0 * f / 8.0, 1.25 + 9.0 * f / 8.0};
    }
    case StarScenario::Peripheral: {
      const double f = kernel_f(r1);
      return {1.5 + 1.5 * f, 0.25 + 3.0 * f / 8.0, 1.25 + 9.0 * f / 8.0};
    }
    case StarScenario::CentralPeripheral: {
      const double f1 = kernel_f(r1);
      const double f2 = kernel_f(r2);
      const double ff = f1 * f2;
      return {0.5 + f1 + 0.5 * f2 + ff, 0.25 * f1 - 0.25 * f2 + 5.0 * ff / 8.0,
              0.5 + 0.75 * f1 + 0.75 * f2 + 3.0 * ff / 8.0};
    }
    case StarScenario::TwoPeripheral: {
      const double f1 = kernel_f(r1);
      const double f2 = kernel_f(r2);
      const double ff = f1 * f2;
      return {0.5 + f1 + f2 + 0.5 * ff, 0.25 * f1 + 0.25 * f2 + ff / 8.0,
              0.5 + 0.75 * f1 + 0.75 * f2 + 3.0 * ff / 8.0};
    }
  }
  throw std::invalid_argument("star_coherence: unknown scenario");
}

/// Alternative central+peripheral global coherence, inconsistent with
/// C_T - C_L: 1/2 + f1/4 - Li(tanh^2 r1) / (4 cosh r2 sinh^2 r2) + 5 f1 f2 / 8.
/// Singular at r2 = 0; kept only to document the discrepancy.
[[nodiscard]] inline double star_global_central_peripheral_alt(double r1, double r2) {
  if (!(r2 > 0.0)) throw std::domain_error("expression is singular at r2 = 0");
  const double t = std::tanh(r1);
  const double s2 = std::sinh(r2);
  const double mixed = polylog_neg_half(t * t) / (4.0 * std::cosh(r2) * s2 * s2);
  return 0.5 + 0.25 * kernel_f(r1) - mixed + 5.0 * kernel_f(r1) * kernel_f(r2) / 8.0;
}

/// N-qubit GHZ with n = |r| accelerated qubits: prod f(r_k).
[[nodiscard]] inline double ghz_n_coherence(std::size_t n_qubits, std::span<const double> r) {
  if (r.size() > n_qubits) throw std::invalid_argument("ghz_n_coherence: n exceeds N");
  return detail::kernel_product(r);
}

/// N-qubit W with n = |r| accelerated qubits:
/// (2/N)[sum_{i<j} f_i f_j + (N - n) sum_i f_i] + (N - n)(N - n - 1)/N,
/// both sums over the accelerated qubits.
[[nodiscard]] inline double w_n_coherence(std::size_t n_qubits, std::span<const double> r) {
  if (r.size() > n_qubits) throw std::invalid_argument("w_n_coherence: n exceeds N");
  const double big_n = static_cast<double>(n_qubits);
  const double inertial = big_n - static_cast<double>(r.size());
  std::vector<double> f;
  for (double x : r) f.push_back(kernel_f(x));
  CompensatedSum<double> pairs;
  CompensatedSum<double> singles;
  for (std::size_t i = 0; i < f.size(); ++i) {
    singles += f[i];
    for (std::size_t j = i + 1; j < f.size(); ++j) pairs += f[i] * f[j];
  }
  return 2.0 / big_n * (pairs.value() + inertial * singles.value()) +
         inertial * (inertial - 1.0) / big_n;
}

/// Equal-r convenience overloads.
[[nodiscard]] inline double ghz_n_coherence(std::size_t n_qubits, std::size_t n_accel, double r) {
  const std::vector<double> rs(n_accel, r);
  return ghz_n_coherence(n_qubits, rs);
}

[[nodiscard]] inline double w_n_coherence(std::size_t n_qubits, std::size_t n_accel, double r) {
  const std::vector<double> rs(n_accel, r);
  return w_n_coherence(n_qubits, rs);
}

/// C^R / C^NR.
[[nodiscard]] inline double normalized_coherence(double c_rel, double c_inertial) {
  if (!(c_inertial > 0.0)) throw std::domain_error("normalized_coherence: inertial coherence must be positive");
  return c_rel / c_inertial;
}

/// Star scenario and (r1, r2) for a set of accelerated parties.
struct StarAssignment {
  StarScenario scenario = StarScenario::Inertial;
  double r1 = 0.0;
  double r2 = 0.0;
};

[[nodiscard]] inline StarAssignment star_assignment(const std::map<PartyId, AccelerationSpec>& accel) {
  const auto central = accel.find(kStarCentralParty);
  std::vector<double> peripheral;
  for (const auto& [p, a] : accel) {
    if (p != kStarCentralParty) peripheral.push_back(a.r);
  }
  if (accel.size() > 2) throw std::invalid_argument("star: at most two accelerated parties");
  if (accel.empty()) return {};
  if (central != accel.end()) {
    if (peripheral.empty()) return {StarScenario::Central, central->second.r, 0.0};
    return {StarScenario::CentralPeripheral, central->second.r, peripheral[0]};
  }
  if (peripheral.size() == 1) return {StarScenario::Peripheral, peripheral[0], 0.0};
  return {StarScenario::TwoPeripheral, peripheral[0], peripheral[1]};
}

/// Closed-form triple for any supported family and acceleration pattern.
/// Families whose marginals are diagonal (GHZ and W types) have C_L = 0;
/// product states have C_G = 0.
[[nodiscard]] inline CoherenceTriple analytic(const StateSpec& spec) {
  validate(spec);
  std::vector<double> rs;
  for (const auto& entry : spec.accel) rs.push_back(entry.second.r);
  const auto r_of = [&](PartyId p) -> std::optional<double> {
    auto it = spec.accel.find(p);
    if (it == spec.accel.end()) return std::nullopt;
    return it->second.r;
  };
  return std::visit(
      [&](const auto& f) -> CoherenceTriple {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, GeneralizedGhz>) {
          const double c = ghz_coherence(f.theta, rs);
          return {c, c, 0.0};
        } else if constexpr (std::is_same_v<F, GeneralizedW>) {
          if (spec.accel.contains(0)) {
            throw std::invalid_argument("w: closed forms cover Bob and/or Charlie accelerated");
          }
          const double c = w_coherence(f.theta, f.phi, r_of(1), r_of(2));
          return {c, c, 0.0};
        } else if constexpr (std::is_same_v<F, SymmetricW>) {
          const double c = w_n_coherence(f.n, rs);
          return {c, c, 0.0};
        } else if constexpr (std::is_same_v<F, GhzN>) {
          const double c = ghz_n_coherence(f.n, rs);
          return {c, c, 0.0};
        } else if constexpr (std::is_same_v<F, PlusProduct>) {
          const double c = f.n == 3 ? separable_coherence(rs) : plus_product_coherence(f.n, rs);
          return {c, 0.0, c};
        } else if constexpr (std::is_same_v<F, WWbar>) {
          return wwbar_coherence(rs);
        } else {
          const StarAssignment s = star_assignment(spec.accel);
          return star_coherence(s.scenario, s.r1, s.r2);
        }
      },
      spec.family);
}

}  // namespace unruh
