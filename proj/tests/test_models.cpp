#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "markagg/costs.hpp"
#include "markagg/error.hpp"
#include "markagg/models.hpp"
#include "test_util.hpp"

using namespace markagg;

TEST_CASE("random stochastic matrices are reproducible") {
  const Matrix a = random_stochastic(5, 7, 3);
  CHECK(a == random_stochastic(5, 7, 3));
  CHECK_FALSE(a == random_stochastic(5, 7, 4));
  CHECK(max_row_sum_error(a) < 1e-12);
}

TEST_CASE("block-stochastic construction") {
  const std::vector<std::size_t> sizes{2, 3};
  const Matrix a{{0, 1}, {1, 0}};
  const LabeledChain lc = gen_block_stochastic(sizes, a, 1);
  CHECK(lc.chain.n_states() == 5);
  CHECK(lc.partition == PartitionMap({0, 0, 1, 1, 1}, 2));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(lc.chain(i, j) == 0.0);
  }
  // Permutation A: the projection is deterministic.
  const FanoCheck f = fano_check(lc.chain, lc.partition, 1);
  CHECK(f.prediction_error == doctest::Approx(0.0));

  // Single block: P' is the block itself.
  const std::vector<std::size_t> one{3};
  const Matrix block{{0.2, 0.3, 0.5}, {0.1, 0.1, 0.8}, {1, 0, 0}};
  const LabeledChain single = gen_block_stochastic(one, Matrix{{1.0}}, {{block}});
  CHECK(single.chain.transitions() == block);

  CHECK_THROWS_AS(gen_block_stochastic(sizes, Matrix{{0.5, 0.4}, {1, 0}}, 1), Error);
}

TEST_CASE("perturbation") {
  const Matrix base{{0, 1}, {1, 0}};
  const Matrix e{{0.5, 0.5}, {0.5, 0.5}};
  CHECK(perturb(base, 0.0, e) == base);
  CHECK(perturb(base, 1.0, e) == e);
  const Matrix mid = perturb(base, 0.2, e);
  CHECK(mid(0, 1) == doctest::Approx(0.9));
  // E must be irreducible when it is actually mixed in.
  CHECK_THROWS_AS(perturb(base, 0.2, Matrix::identity(2)), Error);
  CHECK_NOTHROW(perturb(base, 0.0, Matrix::identity(2)));
  CHECK_THROWS_AS(perturb(base, 1.5, e), Error);
}

TEST_CASE("quasi-periodic model") {
  const LabeledChain lc = gen_quasi_periodic(10, 6);
  CHECK(lc.chain.n_states() == 20);
  CHECK(lc.partition == PartitionMap::blocks(std::vector<std::size_t>{10, 10}));
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < 20; ++j) {
      if (lc.partition[i] == lc.partition[j]) CHECK(lc.chain(i, j) == 0.0);
    }
  }
  // Natural partition alternates deterministically.
  CHECK(fano_check(lc.chain, lc.partition, 1).prediction_error == doctest::Approx(0.0));
  CHECK(pred_cost(lc.chain, lc.partition, 1) ==
        doctest::Approx(redundancy_rate(lc.chain) - 1.0));
}

TEST_CASE("toy model") {
  const Matrix base = toy_base(0.3);
  CHECK(base(4, 0) == doctest::Approx(0.3));
  CHECK(base(4, 1) == doctest::Approx(0.7));
  CHECK(base(5, 5) == 1.0);
  CHECK_THROWS_AS(toy_base(1.2), Error);

  // With a uniform E the chain is exactly lumpable on {{1,2},{3,4},{5},{6}}.
  const Matrix uniform(6, 6, 1.0 / 6);
  CHECK(lump_cost(gen_toy(0.3, 0.05, uniform), toy_lumpable_partition(), 1) <= 1e-12);

  const Matrix e = random_stochastic(6, 6, 10);
  double prev_pe = 1.0, prev_lump = 1.0;
  for (double eps : {0.1, 0.01, 0.001}) {
    const FirstOrderChain chain = gen_toy(0.3, eps, e);
    const double pe = fano_check(chain, toy_predictive_partition(), 2).prediction_error;
    const double lump = lump_cost(chain, toy_lumpable_partition(), 1);
    CHECK(pe < prev_pe);
    CHECK(lump < prev_lump);
    prev_pe = pe;
    prev_lump = lump;
  }
  CHECK(prev_pe < 0.01);
  CHECK(prev_lump < 0.01);
}

TEST_CASE("rate matrices and jump chains") {
  const RateMatrix q = RateMatrix::from_off_diagonal(Matrix{{0, 2, 1}, {1, 0, 0}, {0, 3, 0}});
  CHECK(q(0, 0) == doctest::Approx(-3.0));
  const FirstOrderChain p = embed_jump_chain(q);
  CHECK(p(0, 1) == doctest::Approx(2.0 / 3));
  CHECK(p(0, 0) == 0.0);
  CHECK(p(2, 1) == 1.0);

  CHECK_THROWS_AS(RateMatrix(Matrix{{-1, 2}, {1, -1}}), Error);
  CHECK_THROWS_AS(RateMatrix::from_off_diagonal(Matrix{{0, -1}, {1, 0}}), Error);
  try {
    embed_jump_chain(RateMatrix::from_off_diagonal(Matrix{{0, 1}, {0, 0}}));
    FAIL("expected AbsorbingState");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AbsorbingState);
  }
}

TEST_CASE("maintenance model") {
  for (std::size_t k = 1; k <= 7; ++k) {
    const MaintenanceModel mm = gen_maintenance(k);
    CHECK(mm.rates.n_states() == 2 * k + 4);
    CHECK(mm.reference.n_groups() == k + 3);
    CHECK(mm.state_names.size() == 2 * k + 4);
    for (std::size_t i = 0; i < mm.rates.n_states(); ++i) {
      double s = 0;
      for (std::size_t j = 0; j < mm.rates.n_states(); ++j) s += mm.rates(i, j);
      CHECK(std::fabs(s) < 1e-12);
    }
    CHECK(is_irreducible(embed_jump_chain(mm.rates).transitions()));
  }
  // k = 3 is the drawn instance: W, D1..D3, F1, F0, M1..M4.
  const MaintenanceRates r;
  const MaintenanceModel mm = gen_maintenance(3, r);
  const std::vector<std::string> names{"W", "D1", "D2", "D3", "F1", "F0", "M1", "M2", "M3", "M4"};
  CHECK(mm.state_names == names);
  CHECK(mm.rates(0, 1) == r.lambda_1);  // W -> D1
  CHECK(mm.rates(0, 6) == r.lambda_m);  // W -> M1
  CHECK(mm.rates(0, 5) == r.lambda_0);  // W -> F0
  CHECK(mm.rates(3, 4) == r.lambda_1);  // D3 -> F1
  CHECK(mm.rates(3, 9) == r.lambda_m);  // D3 -> M4
  CHECK(mm.rates(7, 0) == r.mu_m);      // M2 -> W
  CHECK(mm.rates(8, 1) == r.mu_m);      // M3 -> D1
  CHECK(mm.rates(9, 2) == r.mu_m);      // M4 -> D2
  CHECK(mm.rates(4, 0) == r.mu_1);      // F1 -> W
  CHECK(mm.rates(5, 0) == r.mu_0);      // F0 -> W
  CHECK(mm.reference == PartitionMap({0, 1, 2, 3, 4, 5, 1, 2, 3, 4}, 6));

  MaintenanceRates bad;
  bad.lambda_m = 0.0;
  CHECK_THROWS_AS(gen_maintenance(3, bad), Error);
  CHECK_THROWS_AS(gen_maintenance(0), Error);
}

TEST_CASE("simulation follows the chain") {
  const FirstOrderChain chain(Matrix{{0.9, 0.1}, {0.3, 0.7}});
  const auto path = simulate(chain, 200000, 12);
  CHECK(path == simulate(chain, 200000, 12));
  double ones = 0;
  for (auto s : path) ones += static_cast<double>(s);
  CHECK(ones / path.size() == doctest::Approx(0.25).epsilon(0.03));
}
