// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "unruh/density.hpp"
#include "unruh/state_builders.hpp"
#include "unruh/summation.hpp"

namespace unruh {

/// Sum of |rho_ij| over i != j.
[[nodiscard]] inline double l1_total(const DensityMatrix& rho) {
  CompensatedSum<double> acc;
  for (const auto& e : rho.entries()) {
    if (e.row != e.col) acc += std::abs(e.value);
  }
  return 2.0 * acc.value();
}

/// Off-diagonal l1 weight of the product of marginals, without forming it.
///
/// With D_k and O_k the diagonal and off-diagonal l1 mass of marginal k, the
/// product's off-diagonal mass is prod(D_k + O_k) - prod(D_k); it is summed
/// here over nonempty subsets S as prod_{S} O_k prod_{not S} D_k, which
/// avoids cancellation when the O_k are small.
[[nodiscard]] inline double l1_local(const DensityMatrix& rho,
                                     std::span<const std::vector<std::size_t>> subsystems) {
  const auto parts = marginals(rho, subsystems);
  std::vector<double> diag;
  std::vector<double> off;
  for (const auto& m : parts) {
    CompensatedSum<double> d;
    for (const auto& e : m.entries()) {
      if (e.row == e.col) d += std::abs(e.value);
    }
    diag.push_back(d.value());
    off.push_back(l1_total(m));
  }
  const std::size_t k = parts.size();
  CompensatedSum<double> acc;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    double term = 1.0;
    for (std::size_t i = 0; i < k; ++i) term *= (mask >> i) & 1U ? off[i] : diag[i];
    acc += term;
  }
  return acc.value();
}

[[nodiscard]] inline double l1_local(const DensityMatrix& rho) {
  const auto groups = party_groups(rho);
  return l1_local(rho, groups);
}

/// Coherence held in correlations: l1_total(rho) - l1_local(rho).
[[nodiscard]] inline double l1_global(const DensityMatrix& rho,
                                      std::span<const std::vector<std::size_t>> subsystems) {
  return l1_total(rho) - l1_local(rho, subsystems);
}

[[nodiscard]] inline double l1_global(const DensityMatrix& rho) {
  const auto groups = party_groups(rho);
  return l1_global(rho, groups);
}

enum class DistanceKind { Entrywise, OffDiagonal };

/// Entrywise l1 distance sum_ij |a_ij - b_ij| between matrices over the same
/// modes; OffDiagonal skips i == j.
[[nodiscard]] inline double l1_distance(const DensityMatrix& a, const DensityMatrix& b,
                                        DistanceKind kind = DistanceKind::Entrywise) {
  if (!std::equal(a.modes().begin(), a.modes().end(), b.modes().begin(), b.modes().end())) {
    throw std::invalid_argument("l1_distance: matrices over different modes");
  }
  CompensatedSum<double> acc;
  auto add = [&](const DensityEntry& key, Complex diff) {
    if (key.row == key.col) {
      if (kind == DistanceKind::Entrywise) acc += std::abs(diff);
    } else {
      acc += 2.0 * std::abs(diff);
    }
  };
  const auto ea = a.entries();
  const auto eb = b.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && detail::entry_less(ea[i], eb[j]))) {
      add(ea[i], ea[i].value);
      ++i;
    } else if (i == ea.size() || detail::entry_less(eb[j], ea[i])) {
      add(eb[j], -eb[j].value);
      ++j;
    } else {
      add(ea[i], ea[i].value - eb[j].value);
      ++i;
      ++j;
    }
  }
  return acc.value();
}

struct CoherenceReport {
  double c_total = 0.0;
  std::optional<double> c_global;
  std::optional<double> c_local;
  std::map<PartyId, std::size_t> n_max_used;
  double tail_bound_total = 0.0;
};

/// Numeric pipeline: build the state, trace out region II, and evaluate
/// C_T, C_G and C_L over the per-party subsystems.
[[nodiscard]] inline CoherenceReport measure(const StateSpec& spec) {
  const BuiltState built = build(spec);
  const DensityMatrix rho = reduce_accessible(built.state);
  CoherenceReport report;
  report.c_total = l1_total(rho);
  report.c_local = l1_local(rho);
  report.c_global = report.c_total - *report.c_local;
  report.n_max_used = built.n_max;
  report.tail_bound_total = built.tail_bound;
  return report;
}

}  // namespace unruh
