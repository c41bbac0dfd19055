// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <numbers>

#include "unruh/closed_forms.hpp"

using namespace unruh;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

StateSpec spec_of(Family f, std::map<PartyId, double> r = {}) {
  StateSpec s{std::move(f)};
  for (const auto& [p, v] : r) s.accel[p] = AccelerationSpec::from_r(v);
  return s;
}

}  // namespace

TEST_CASE("GHZ coherence") {
  CHECK_THAT(ghz_coherence(kPi / 4), WithinAbs(1.0, 1e-15));
  CHECK_THAT(ghz_coherence(kPi / 4, {2.0}), WithinRel(0.898750522452205352, 1e-12));
  CHECK_THAT(ghz_coherence(kPi / 4, {2.0, 2.0}), WithinRel(0.898750522452205352 * 0.898750522452205352, 1e-12));
  CHECK_THAT(ghz_coherence(kPi / 6, {1.0}), WithinRel(std::sin(kPi / 3) * 0.943964761544237945, 1e-12));
  CHECK(ghz_coherence(0.0, {1.0}) == 0.0);
  CHECK(ghz_coherence(3 * kPi / 4) > 0.0);
  CHECK_THROWS_AS(ghz_coherence(0.3, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("GHZ theta profile is symmetric about pi/4 and peaks there") {
  for (double r : {0.0, 0.5, 2.0}) {
    for (double d = 0.0; d < kPi / 4; d += 0.05) {
      CHECK_THAT(ghz_coherence(kPi / 4 + d, {r}), WithinAbs(ghz_coherence(kPi / 4 - d, {r}), 1e-14));
      CHECK(ghz_coherence(kPi / 4 + d, {r}) <= ghz_coherence(kPi / 4, {r}));
    }
  }
}

TEST_CASE("W coherence") {
  CHECK_THAT(w_coherence(kSymmetricWTheta, kSymmetricWPhi), WithinAbs(2.0, 1e-14));
  CHECK_THAT(w_coherence(kSymmetricWTheta, kSymmetricWPhi, {}, 2.0), WithinAbs(1.865001, 1e-6));
  const double f = kernel_f(1.2);
  const double st = std::sin(0.8), ct = std::cos(0.8), sp = std::sin(0.5), cp = std::cos(0.5);
  CHECK_THAT(w_coherence(0.8, 0.5, {}, 1.2),
             WithinRel(2 * st * ct * (sp + cp) * f + 2 * st * st * sp * cp, 1e-14));
  const double fb = kernel_f(0.7);
  CHECK_THAT(w_coherence(0.8, 0.5, 0.7, 1.2),
             WithinRel(2 * st * st * sp * cp * fb + 2 * st * ct * cp * f + 2 * st * ct * sp * fb * f, 1e-14));
  // signs of the trigonometric factors do not change an l1 norm
  CHECK_THAT(w_coherence(2.5, 4.0, {}, 1.0),
             WithinRel(w_coherence(kPi - 2.5, 4.0 - kPi, {}, 1.0), 1e-13));
}

TEST_CASE("W reduced states") {
  const double f = kernel_f(1.1);
  const double st = std::sin(0.9), ct = std::cos(0.9), sp = std::sin(0.3), cp = std::cos(0.3);
  CHECK_THAT(w_reduced_coherence(0.9, 0.3, 0, {}, 1.1), WithinRel(2 * st * ct * sp * f, 1e-14));
  CHECK_THAT(w_reduced_coherence(0.9, 0.3, 1, {}, 1.1), WithinRel(2 * st * ct * cp * f, 1e-14));
  CHECK_THAT(w_reduced_coherence(0.9, 0.3, 2, {}, 1.1), WithinRel(2 * st * st * sp * cp, 1e-14));
  // the sin(phi) variant agrees only at phi = pi/4
  CHECK(std::abs(w_reduced_ac_sin_phi(0.9, 0.3, 1.1) - w_reduced_coherence(0.9, 0.3, 1, {}, 1.1)) > 0.1);
  CHECK_THAT(w_reduced_ac_sin_phi(0.9, kPi / 4, 1.1),
             WithinRel(w_reduced_coherence(0.9, kPi / 4, 1, {}, 1.1), 1e-14));
  CHECK_THROWS_AS(w_reduced_coherence(0.9, 0.3, 3), std::invalid_argument);
}

TEST_CASE("separable state") {
  CHECK(separable_coherence() == 7.0);
  CHECK_THAT(separable_coherence({2.0}), WithinAbs(6.595002, 1e-6));
  CHECK_THAT(separable_coherence({2.0, 2.0}), WithinAbs(6.210507, 1e-6));
  // the closed forms factorize as prod(1 + O_k) - 1
  CHECK_THAT(separable_coherence({0.7, 1.9}), WithinRel(plus_product_coherence(3, std::vector{0.7, 1.9}), 1e-14));
  CHECK_THAT(separable_coherence({0.7}), WithinRel(plus_product_coherence(3, std::vector{0.7}), 1e-14));
  CHECK_THAT(plus_product_coherence(5, std::vector<double>{}), WithinAbs(31.0, 1e-14));
}

TEST_CASE("WWbar triples") {
  const auto t0 = wwbar_coherence();
  CHECK_THAT(t0.global + t0.local, WithinAbs(t0.total, 1e-15));
  const auto t1 = wwbar_coherence({2.0});
  CHECK_THAT(t1.total, WithinAbs(4.696252, 1e-6));
  for (const auto& t : {wwbar_coherence({1.3}), wwbar_coherence({0.4, 2.2})}) {
    CHECK_THAT(t.global + t.local, WithinAbs(t.total, 1e-14));
  }
  const auto t2 = wwbar_coherence({0.0, 0.0});
  CHECK_THAT(t2.total, WithinAbs(5.0, 1e-14));
  CHECK_THAT(t2.global, WithinAbs(37.0 / 27.0, 1e-14));
  CHECK_THROWS_AS(wwbar_coherence({1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("star triples") {
  CHECK_THAT(star_coherence(StarScenario::Central, 2.0).total, WithinAbs(2.797501, 1e-6));
  CHECK_THAT(star_coherence(StarScenario::Peripheral, 2.0).total, WithinAbs(2.848126, 1e-6));
  for (auto s : {StarScenario::Inertial, StarScenario::Central, StarScenario::Peripheral,
                 StarScenario::CentralPeripheral, StarScenario::TwoPeripheral}) {
    const auto t = star_coherence(s, 0.9, 1.7);
    CHECK_THAT(t.global + t.local, WithinAbs(t.total, 1e-14));
    const auto z = star_coherence(s, 0.0, 0.0);
    CHECK_THAT(z.total, WithinAbs(3.0, 1e-15));
    CHECK_THAT(z.global, WithinAbs(0.625, 1e-15));
  }
}

TEST_CASE("alternative central plus peripheral global coherence") {
  const double alt = star_global_central_peripheral_alt(1.0, 1.5);
  const double consistent = star_coherence(StarScenario::CentralPeripheral, 1.0, 1.5).global;
  CHECK(std::abs(alt - consistent) > 0.1);
  CHECK_THROWS_AS(star_global_central_peripheral_alt(1.0, 0.0), std::domain_error);
}

TEST_CASE("N-party closed forms") {
  CHECK_THAT(w_n_coherence(11, 10, 2.0), WithinAbs(8.242976, 1e-6));
  CHECK_THAT(normalized_coherence(w_n_coherence(11, 10, 2.0), w_n_coherence(11, 0, 0.0)),
             WithinAbs(0.8242976, 1e-7));
  CHECK_THAT(w_n_coherence(11, 0, 0.0), WithinAbs(10.0, 1e-14));
  CHECK_THAT(w_n_coherence(3, 1, 2.0), WithinRel(w_coherence(kSymmetricWTheta, kSymmetricWPhi, {}, 2.0), 1e-13));
  CHECK_THAT(w_n_coherence(3, 2, 2.0), WithinRel(w_coherence(kSymmetricWTheta, kSymmetricWPhi, 2.0, 2.0), 1e-13));
  CHECK_THAT(ghz_n_coherence(11, 10, 2.0), WithinRel(0.343867838315519566, 1e-11));
  CHECK(ghz_n_coherence(11, 0, 2.0) == 1.0);
  CHECK_THROWS_AS(w_n_coherence(3, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(normalized_coherence(1.0, 0.0), std::domain_error);
}

TEST_CASE("N-party coherence decreases with more accelerated qubits") {
  for (std::size_t n = 1; n <= 10; ++n) {
    CHECK(w_n_coherence(11, n, 1.5) < w_n_coherence(11, n - 1, 1.5));
    CHECK(ghz_n_coherence(11, n, 1.5) < ghz_n_coherence(11, n - 1, 1.5));
  }
}

TEST_CASE("star assignment maps party 2 to the centre") {
  std::map<PartyId, AccelerationSpec> a;
  a[2] = AccelerationSpec::from_r(1.0);
  CHECK(star_assignment(a).scenario == StarScenario::Central);
  a[0] = AccelerationSpec::from_r(0.5);
  const auto cp = star_assignment(a);
  CHECK(cp.scenario == StarScenario::CentralPeripheral);
  CHECK(cp.r1 == 1.0);
  CHECK(cp.r2 == 0.5);
  a.erase(2);
  CHECK(star_assignment(a).scenario == StarScenario::Peripheral);
  a[1] = AccelerationSpec::from_r(0.2);
  CHECK(star_assignment(a).scenario == StarScenario::TwoPeripheral);
  a[2] = AccelerationSpec::from_r(0.2);
  CHECK_THROWS_AS(star_assignment(a), std::invalid_argument);
}

TEST_CASE("dispatcher") {
  const auto g = analytic(spec_of(GeneralizedGhz{kPi / 4}, {{1, 2.0}}));
  CHECK(g.local == 0.0);
  CHECK(g.global == g.total);
  const auto p = analytic(spec_of(PlusProduct{3}, {{0, 2.0}}));
  CHECK(p.global == 0.0);
  CHECK_THAT(p.local, WithinAbs(6.595002, 1e-6));
  CHECK_THAT(analytic(spec_of(PlusProduct{5}, {{0, 2.0}})).total, WithinRel(plus_product_coherence(5, std::vector{2.0}), 1e-15));
  CHECK_THAT(analytic(spec_of(SymmetricW{3}, {{2, 2.0}})).total, WithinAbs(1.865001, 1e-6));
  CHECK_THROWS_AS(analytic(spec_of(GeneralizedW{1.0, 0.5}, {{0, 1.0}})), std::invalid_argument);
  CHECK_THROWS_AS(analytic(spec_of(GeneralizedGhz{}, {{0, 1.0}, {1, 1.0}, {2, 1.0}})), std::invalid_argument);
}
