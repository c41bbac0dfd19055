// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace unruh {

// Precondition failures throw std::invalid_argument (bad parameters) or
// std::domain_error (argument outside a function's mathematical domain).
// Both derive from std::logic_error, which the CLI maps to a usage error.

/// A tolerance-based truncation would need more Fock levels than allowed.
class TruncationCapExceeded : public std::runtime_error {
 public:
  TruncationCapExceeded(double r, double tail_tol, std::size_t cap)
      : std::runtime_error(message(r, tail_tol, cap)),
        r_(r),
        tail_tol_(tail_tol),
        cap_(cap) {}

  [[nodiscard]] double r() const noexcept { return r_; }
  [[nodiscard]] double tail_tol() const noexcept { return tail_tol_; }
  [[nodiscard]] std::size_t cap() const noexcept { return cap_; }

 private:
  static std::string message(double r, double tail_tol, std::size_t cap) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "truncation for r=%.17g at tail tolerance %.3g needs more than n_max=%zu",
                  r, tail_tol, cap);
    return buf;
  }

  double r_;
  double tail_tol_;
  std::size_t cap_;
};

}  // namespace unruh
