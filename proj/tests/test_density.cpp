// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "support/dense_oracle.hpp"
#include "unruh/coherence.hpp"
#include "unruh/density.hpp"
#include "unruh/state_builders.hpp"

using namespace unruh;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<Family> all_families() {
  return {GeneralizedGhz{0.6}, GeneralizedW{1.0, 0.4}, SymmetricW{3}, GhzN{3},
          PlusProduct{3},      WWbar{},               Star{}};
}

// every subset of kept modes, as sorted index lists
std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t m = 0; m < n; ++m) {
      if ((mask >> m) & 1U) s.push_back(m);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void check_against_oracle(const PureState& psi, const std::vector<std::size_t>& keep) {
  const DensityMatrix sparse = reduce(psi, keep);
  const Eigen::MatrixXcd dense = oracle::dense_reduce(psi, keep);
  REQUIRE(sparse.dimension() == static_cast<std::uint64_t>(dense.rows()));
  CHECK(oracle::max_abs_diff(oracle::to_dense(sparse), dense) <= 1e-13);
}

}  // namespace

TEST_CASE("sparse partial trace equals the dense oracle on small instances") {
  const std::map<PartyId, double> patterns[] = {{}, {{2, 0.8}}, {{0, 1.3}}, {{1, 0.4}, {2, 1.1}}};
  for (const auto& family : all_families()) {
    for (const auto& pattern : patterns) {
      StateSpec spec{family, {}, TruncationPolicy::fixed(pattern.size() > 1 ? 0 : 2)};
      for (const auto& [p, r] : pattern) spec.accel[p] = AccelerationSpec::from_r(r);
      const BuiltState b = build(spec);
      REQUIRE(oracle::total_dim(b.state.registry()) <= 64);
      INFO(family_name(family) << " with " << pattern.size() << " accelerated");
      for (const auto& keep : nonempty_subsets(b.state.registry().size())) check_against_oracle(b.state, keep);
    }
  }
}

TEST_CASE("sparse partial trace equals the dense oracle on random states") {
  std::mt19937_64 rng(20240611);
  const ModeRegistry layouts[] = {make_registry(3), make_registry(3, {{1, 1}}), make_registry(2, {{0, 2}}),
                                  make_registry(4, {{3, 0}})};
  for (const auto& reg : layouts) {
    for (int trial = 0; trial < 3; ++trial) {
      const PureState psi = oracle::random_state(reg, rng);
      for (const auto& keep : nonempty_subsets(reg.size())) check_against_oracle(psi, keep);
    }
  }
}

TEST_CASE("reduced states are Hermitian, unit trace and positive semidefinite") {
  std::mt19937_64 rng(99);
  const PureState psi = oracle::random_state(make_registry(3, {{2, 1}}), rng);
  for (const auto& keep : nonempty_subsets(4)) {
    const DensityMatrix rho = reduce(psi, keep);
    CHECK_THAT(rho.trace(), WithinAbs(1.0, 1e-13));
    const Eigen::MatrixXcd m = oracle::to_dense(rho);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-13);
  }
}

TEST_CASE("storage is upper triangular, sorted and real on the diagonal") {
  const DensityMatrix rho = reduce_accessible(
      build({WWbar{}, {{2, AccelerationSpec::from_r(1.2)}}, TruncationPolicy::fixed(5)}).state);
  const auto e = rho.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(e[i].row <= e[i].col);
    if (e[i].row == e[i].col) CHECK(e[i].value.imag() == 0.0);
    if (i > 0) CHECK(detail::entry_less(e[i - 1], e[i]));
  }
  CHECK(rho.at(e.back().col, e.back().row) == std::conj(e.back().value));
}

TEST_CASE("lower-triangle input is folded and duplicates merged") {
  const std::vector<Mode> qubit{{ModeKind::InertialQubit, 0, 2}};
  const DensityMatrix rho(qubit, {{0, 0, 0.25}, {0, 0, 0.25}, {1, 1, 0.5}, {1, 0, Complex(0.1, 0.2)}});
  CHECK(rho.nnz() == 3);
  CHECK(rho.at(0, 1) == Complex(0.1, -0.2));
  CHECK(rho.at(0, 0) == Complex(0.5));
  CHECK(rho.label_of(1) == OccupationLabel{1});
  CHECK_THROWS_AS(DensityMatrix(qubit, {{2, 0, 1.0}}), std::out_of_range);
}

TEST_CASE("decohere keeps the diagonal and is idempotent") {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = reduce(oracle::random_state(make_registry(3), rng), {0, 1, 2});
  const DensityMatrix d = decohere(rho);
  CHECK(l1_total(d) == 0.0);
  CHECK_THAT(d.trace(), WithinAbs(rho.trace(), 1e-15));
  const DensityMatrix dd = decohere(d);
  REQUIRE(dd.nnz() == d.nnz());
  for (std::size_t i = 0; i < d.nnz(); ++i) CHECK(dd.entries()[i].value == d.entries()[i].value);
}

TEST_CASE("trace out by party") {
  const DensityMatrix rho = reduce_accessible(build({GeneralizedGhz{std::numbers::pi / 4}}).state);
  const DensityMatrix bc = trace_out_parties(rho, {0});
  REQUIRE(bc.modes().size() == 2);
  CHECK(bc.nnz() == 2);
  CHECK_THAT(bc.at({0, 0}, {0, 0}).real(), WithinAbs(0.5, 1e-15));
  CHECK_THAT(bc.at({1, 1}, {1, 1}).real(), WithinAbs(0.5, 1e-15));
  CHECK(l1_total(bc) == 0.0);
  CHECK_THROWS_AS(trace_out_parties(rho, {5}), std::invalid_argument);
  CHECK_THROWS_AS(trace_out_parties(rho, {0, 1, 2}), std::invalid_argument);
}

TEST_CASE("marginal product of the WWbar state") {
  const DensityMatrix rho = reduce_accessible(build({WWbar{}}).state);
  const auto groups = party_groups(rho);
  const auto parts = marginals(rho, groups);
  for (const auto& m : parts) {
    CHECK_THAT(m.at(0, 0).real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(m.at(0, 1).real(), WithinAbs(1.0 / 3.0, 1e-15));
  }
  const DensityMatrix pi = marginal_product(rho, groups);
  CHECK(pi.nnz() == 36);
  CHECK_THAT(pi.trace(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(pi.at({0, 0, 0}, {1, 1, 1}).real(), WithinAbs(1.0 / 27.0, 1e-15));
  CHECK_THAT(l1_total(pi), WithinAbs(1.0 * 1.0 * 1.0 * (5.0 / 3.0) * (5.0 / 3.0) * (5.0 / 3.0) - 1.0, 1e-13));
}

TEST_CASE("marginal product is a fixed point on product states") {
  std::mt19937_64 rng(11);
  const PureState a = oracle::random_state(make_registry(1), rng);
  const PureState b = oracle::random_state(ModeRegistry({{ModeKind::InertialQubit, 1, 2}}), rng);
  const PureState c = oracle::random_state(ModeRegistry({{ModeKind::InertialQubit, 2, 2}}), rng);
  const DensityMatrix rho = reduce(tensor(tensor(a, b), c), {0, 1, 2});
  const auto groups = party_groups(rho);
  const DensityMatrix pi = marginal_product(rho, groups);
  CHECK(oracle::max_abs_diff(oracle::to_dense(pi), oracle::to_dense(rho)) <= 1e-14);
  CHECK(l1_distance(pi, rho) <= 1e-13);
}

TEST_CASE("marginal product with an accelerated party matches a dense Kronecker product") {
  const BuiltState b = build({GeneralizedW{1.0, 0.7}, {{1, AccelerationSpec::from_r(0.9)}}, TruncationPolicy::fixed(3)});
  const DensityMatrix rho = reduce_accessible(b.state);
  const auto groups = party_groups(rho);
  const auto parts = marginals(rho, groups);
  Eigen::MatrixXcd kron = Eigen::MatrixXcd::Ones(1, 1);
  for (const auto& m : parts) {
    const Eigen::MatrixXcd d = oracle::to_dense(m);
    Eigen::MatrixXcd next(kron.rows() * d.rows(), kron.cols() * d.cols());
    for (Eigen::Index i = 0; i < kron.rows(); ++i) {
      for (Eigen::Index j = 0; j < kron.cols(); ++j) next.block(i * d.rows(), j * d.cols(), d.rows(), d.cols()) = kron(i, j) * d;
    }
    kron = next;
  }
  CHECK(oracle::max_abs_diff(oracle::to_dense(marginal_product(rho, groups)), kron) <= 1e-14);
}

TEST_CASE("partitions must cover every mode once") {
  const DensityMatrix rho = reduce_accessible(build({WWbar{}}).state);
  const std::vector<std::vector<std::size_t>> missing{{0}, {1}};
  const std::vector<std::vector<std::size_t>> doubled{{0, 1}, {1, 2}};
  CHECK_THROWS_AS(marginals(rho, missing), std::invalid_argument);
  CHECK_THROWS_AS(marginals(rho, doubled), std::invalid_argument);
  CHECK_THROWS_AS(reduce(build({WWbar{}}).state, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(reduce(build({WWbar{}}).state, std::vector<std::size_t>{}), std::invalid_argument);
}
