// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "unruh/state_builders.hpp"

using namespace unruh;
using Catch::Matchers::WithinAbs;

namespace {

StateSpec spec_of(Family f, std::map<PartyId, double> r = {}, TruncationPolicy p = TruncationPolicy::tolerance(1e-10)) {
  StateSpec s{std::move(f), {}, p};
  for (const auto& [party, value] : r) s.accel[party] = AccelerationSpec::from_r(value);
  return s;
}

}  // namespace

TEST_CASE("inertial families normalised with the expected supports") {
  struct Case { Family f; std::size_t nnz; };
  const Case cases[] = {
      {GeneralizedGhz{0.4}, 2}, {GeneralizedW{0.9, 0.3}, 3}, {SymmetricW{5}, 5}, {GhzN{7}, 2},
      {PlusProduct{4}, 16},     {WWbar{}, 6},                {Star{}, 4},
  };
  for (const auto& c : cases) {
    INFO(family_name(c.f));
    const BuiltState b = build(spec_of(c.f));
    CHECK(b.state.nnz() == c.nnz);
    CHECK_THAT(norm_sq(b.state), WithinAbs(1.0, 1e-15));
    CHECK(b.tail_bound == 0.0);
    CHECK(b.n_max.empty());
  }
}

TEST_CASE("inertial amplitudes") {
  const BuiltState ghz = build(spec_of(GeneralizedGhz{0.3}));
  CHECK(ghz.state.amplitude({0, 0, 0}) == Complex(std::cos(0.3)));
  CHECK(ghz.state.amplitude({1, 1, 1}) == Complex(std::sin(0.3)));

  const BuiltState w = build(spec_of(GeneralizedW{0.9, 0.3}));
  CHECK(w.state.amplitude({1, 0, 0}) == Complex(std::sin(0.9) * std::cos(0.3)));
  CHECK(w.state.amplitude({0, 1, 0}) == Complex(std::sin(0.9) * std::sin(0.3)));
  CHECK(w.state.amplitude({0, 0, 1}) == Complex(std::cos(0.9)));

  const BuiltState star = build(spec_of(Star{}));
  for (OccupationLabel l : {OccupationLabel{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {1, 1, 1}}) {
    CHECK(star.state.amplitude(l) == Complex(0.5));
  }
  const BuiltState ww = build(spec_of(WWbar{}));
  CHECK(ww.state.amplitude({0, 1, 1}) == Complex(1.0 / std::sqrt(6.0)));
  CHECK(ww.state.amplitude({0, 0, 0}) == Complex(0.0));
  CHECK(ww.state.amplitude({1, 1, 1}) == Complex(0.0));

  const BuiltState sym = build(spec_of(SymmetricW{3}));
  const BuiltState gw = build(spec_of(GeneralizedW{kSymmetricWTheta, kSymmetricWPhi}));
  for (const auto& t : sym.state.terms()) CHECK_THAT(std::abs(t.value - gw.state.amplitude(t.label)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("accelerating at r = 0 leaves amplitudes unchanged") {
  const BuiltState inertial = build(spec_of(GeneralizedW{1.1, 0.4}));
  const BuiltState accel = build(spec_of(GeneralizedW{1.1, 0.4}, {{2, 0.0}, {0, 0.0}}));
  REQUIRE(accel.state.nnz() == inertial.state.nnz());
  CHECK(accel.n_max.at(0) == 0);
  for (const auto& t : inertial.state.terms()) {
    const OccupationLabel lifted{t.label[0], 0, t.label[1], t.label[2], 0};
    CHECK(accel.state.amplitude(lifted) == t.value);
  }
}

TEST_CASE("GHZ with one accelerated party at r = 1 and n_max = 1") {
  const BuiltState b = build(spec_of(GeneralizedGhz{std::numbers::pi / 4}, {{2, 1.0}}, TruncationPolicy::fixed(1)));
  const double c = 1.0 / std::numbers::sqrt2;
  REQUIRE(b.state.nnz() == 4);
  CHECK(b.state.registry().size() == 4);
  CHECK_THAT(b.state.amplitude({0, 0, 0, 0}).real(), WithinAbs(c * 0.648054273663885399575, 1e-15));
  CHECK_THAT(b.state.amplitude({0, 0, 1, 1}).real(), WithinAbs(c * 0.493554347564573075270, 1e-15));
  CHECK_THAT(b.state.amplitude({1, 1, 1, 0}).real(), WithinAbs(c * 0.419974341614026069394, 1e-15));
  CHECK_THAT(b.state.amplitude({1, 1, 2, 1}).real(), WithinAbs(c * 0.452336213899538391210, 1e-15));
  CHECK(b.n_max.at(2) == 1);
  CHECK(norm_sq(b.state) < 1.0);
  CHECK(norm_sq(b.state) + b.tail_bound >= 1.0 - 1e-15);
}

TEST_CASE("support sizes with accelerated parties") {
  const auto p = TruncationPolicy::fixed(3);
  CHECK(build(spec_of(GeneralizedGhz{0.5}, {{2, 1.0}}, p)).state.nnz() == 8);
  CHECK(build(spec_of(GeneralizedGhz{0.5}, {{1, 1.0}, {2, 1.0}}, p)).state.nnz() == 32);
  CHECK(build(spec_of(PlusProduct{3}, {{0, 1.0}}, p)).state.nnz() == 32);
  CHECK(build(spec_of(Star{}, {{2, 0.7}}, p)).state.nnz() == 16);
}

TEST_CASE("norm deficit is bounded by the reported tail") {
  for (double r : {0.5, 1.5, 2.5}) {
    const BuiltState b = build(spec_of(WWbar{}, {{1, r}, {2, 0.5 * r}}, TruncationPolicy::tolerance(1e-6)));
    const double deficit = 1.0 - norm_sq(b.state);
    CHECK(deficit >= -1e-14);
    CHECK(deficit <= b.tail_bound + 1e-14);
    CHECK(b.tail_bound <= 2e-6);
  }
}

TEST_CASE("visible subsystems") {
  const auto subs = party_subsystems(spec_of(GeneralizedGhz{}, {{1, 1.0}}));
  REQUIRE(subs.size() == 3);
  CHECK(subs[0].modes == std::vector<std::size_t>{0});
  CHECK(subs[1].modes == std::vector<std::size_t>{1});
  CHECK(subs[2].modes == std::vector<std::size_t>{3});
}

TEST_CASE("family names and party counts") {
  CHECK(family_name(SymmetricW{3}) == "w-sym");
  CHECK(family_name(SymmetricW{6}) == "w-n");
  CHECK(family_name(Star{}) == "star");
  CHECK(party_count(GhzN{9}) == 9);
  CHECK(party_count(WWbar{}) == 3);
}

TEST_CASE("invalid specifications") {
  CHECK_THROWS_AS(build(spec_of(GeneralizedGhz{-0.1})), std::invalid_argument);
  CHECK_THROWS_AS(build(spec_of(GeneralizedGhz{2 * std::numbers::pi})), std::invalid_argument);
  CHECK_THROWS_AS(build(spec_of(GeneralizedW{0.3, 7.0})), std::invalid_argument);
  CHECK_THROWS_AS(build(spec_of(GhzN{1})), std::invalid_argument);
  CHECK_THROWS_AS(build(spec_of(SymmetricW{13})), std::invalid_argument);
  CHECK_THROWS_AS(build(spec_of(GeneralizedGhz{}, {{3, 1.0}})), std::invalid_argument);
  CHECK_THROWS_AS(build(spec_of(GhzN{11}, {{9, 1.0}, {10, 1.0}})), std::invalid_argument);
  StateSpec bad = spec_of(Star{});
  bad.accel[0] = AccelerationSpec{-1.0, std::nullopt};
  CHECK_THROWS_AS(build(bad), std::invalid_argument);
}
