// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <concepts>

#ifdef __FAST_MATH__
#error "compensated summation is defeated by -ffast-math"
#endif

namespace unruh {

/// Neumaier-style compensated accumulator. Unlike plain Kahan summation it
/// stays exact when an addend is larger in magnitude than the running sum.
template <std::floating_point Real>
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(Real initial) : sum_(initial) {}

  constexpr CompensatedSum& operator+=(Real value) {
    const Real t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  constexpr CompensatedSum& operator-=(Real value) { return *this += -value; }

  [[nodiscard]] constexpr Real value() const { return sum_ + compensation_; }
  constexpr explicit operator Real() const { return value(); }

 private:
  Real sum_{0};
  Real compensation_{0};
};

/// Component-wise compensated sum for complex addends.
template <std::floating_point Real>
class CompensatedComplexSum {
 public:
  constexpr CompensatedComplexSum& operator+=(std::complex<Real> value) {
    re_ += value.real();
    im_ += value.imag();
    return *this;
  }

  [[nodiscard]] constexpr std::complex<Real> value() const {
    return {re_.value(), im_.value()};
  }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace unruh
