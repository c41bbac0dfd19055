// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "unruh/rindler_expansion.hpp"
#include "unruh/summation.hpp"

namespace unruh {

/// Large-r limit of kernel_f: Gamma(3/2) = sqrt(pi)/2.
inline constexpr double kKernelSaturation = 0.886226925452758013649083741671;

/// Above this argument polylog_neg_half switches from direct summation to
/// the expansion about z = 1.
inline constexpr double kPolylogSeriesSwitch = 0.9;

namespace detail {

/// Sum_{k>=1} sqrt(k) z^k by compensated summation; intended for z <= 0.95.
[[nodiscard]] inline double polylog_neg_half_direct(double z) {
  if (z == 0.0) return 0.0;
  CompensatedSum<double> acc;
  double previous = 0.0;
  for (std::size_t k = 1; k < 200000; ++k) {
    const double kk = static_cast<double>(k);
    const double term = std::sqrt(kk) * std::pow(z, kk);
    acc += term;
    if (term < previous && term < 1e-18 * acc.value()) break;
    previous = term;
  }
  return acc.value();
}

inline constexpr std::size_t kZetaTerms = 30;

/// zeta(-1/2 - k) / k!, the regular part of Li_{-1/2}(e^mu) about mu = 0.
[[nodiscard]] inline const std::array<double, kZetaTerms>& polylog_regular_coefficients() {
  static const std::array<double, kZetaTerms> table = [] {
    std::array<double, kZetaTerms> c{};
    double factorial = 1.0;
    for (std::size_t k = 0; k < kZetaTerms; ++k) {
      if (k > 0) factorial *= static_cast<double>(k);
      c[k] = std::riemann_zeta(-0.5 - static_cast<double>(k)) / factorial;
    }
    return c;
  }();
  return table;
}

/// Regular part Sum_k zeta(-1/2-k) mu^k / k!, convergent for |mu| < 2 pi.
[[nodiscard]] inline double polylog_regular_part(double mu) {
  const auto& c = polylog_regular_coefficients();
  double sum = 0.0;
  double power = 1.0;
  for (std::size_t k = 0; k < kZetaTerms; ++k) {
    const double term = c[k] * power;
    sum += term;
    if (k > 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= mu;
  }
  return sum;
}

/// Li_{-1/2}(e^mu) for mu < 0 near zero:
/// Gamma(3/2) (-mu)^{-3/2} + Sum_k zeta(-1/2-k) mu^k / k!.
[[nodiscard]] inline double polylog_neg_half_near_one(double mu) {
  return kKernelSaturation * std::pow(-mu, -1.5) + polylog_regular_part(mu);
}

}  // namespace detail

/// Li_{-1/2}(z) = Sum_{k>=1} sqrt(k) z^k for 0 <= z < 1.
[[nodiscard]] inline double polylog_neg_half(double z) {
  if (!(z >= 0.0 && z < 1.0)) throw std::domain_error("polylog_neg_half: z must lie in [0, 1)");
  if (z <= kPolylogSeriesSwitch) return detail::polylog_neg_half_direct(z);
  return detail::polylog_neg_half_near_one(std::log(z));
}

/// Coefficients of the small-r expansion f(r) = 1 + c2 r^2 + c4 r^4 + ...
inline constexpr double kKernelC2 = std::numbers::sqrt2 - 1.5;
inline constexpr double kKernelC4 = 11.0 / 8.0 + std::numbers::sqrt3 - 13.0 * std::numbers::sqrt2 / 6.0;

/// Below this r the kernel uses its Taylor expansion.
inline constexpr double kKernelSmallR = 1e-4;

/// f(r) = Li_{-1/2}(tanh^2 r) / (sinh^2 r cosh r), the factor by which each
/// accelerated party scales an off-diagonal element it participates in.
/// f(0) = 1, decreasing to sqrt(pi)/2.
[[nodiscard]] inline double kernel_f(double r) {
  if (!(r >= 0.0) || std::isnan(r)) throw std::domain_error("kernel_f: r must be >= 0");
  if (r < kKernelSmallR) {
    const double r2 = r * r;
    return 1.0 + r2 * (kKernelC2 + r2 * kKernelC4);
  }
  if (std::isinf(r)) return kKernelSaturation;
  const double t = std::tanh(r);
  const double z = t * t;
  if (z <= kPolylogSeriesSwitch) {
    const double s = std::sinh(r);
    return detail::polylog_neg_half_direct(z) / (s * s * std::cosh(r));
  }
  // Near z = 1 both numerator and denominator grow like e^{3r}; divide in
  // log space.
  const double mu = 2.0 * detail::log_tanh(r);
  if (mu == 0.0) return kKernelSaturation;
  const double log_denominator = 2.0 * detail::log_sinh(r) + detail::log_cosh(r);
  const double singular = kKernelSaturation * std::exp(-1.5 * std::log(-mu) - log_denominator);
  return singular + detail::polylog_regular_part(mu) * std::exp(-log_denominator);
}

}  // namespace unruh
