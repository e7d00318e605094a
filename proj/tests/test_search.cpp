#include <doctest.h>

#include <functional>
#include <random>

#include "markagg/error.hpp"
#include "markagg/models.hpp"
#include "markagg/search.hpp"
#include "test_util.hpp"

using namespace markagg;

namespace {

// All surjective labelings of n states into m groups (restricted growth strings).
double brute_minimum(CostEvaluator& eval, std::size_t n, std::size_t m) {
  std::vector<std::size_t> a(n, 0);
  double best = 1e300;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      if (used == m) best = std::min(best, eval(a, m));
      return;
    }
    for (std::size_t v = 0; v <= std::min(used, m - 1); ++v) {
      a[i] = v;
      rec(i + 1, std::max(used, v + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("stirling numbers") {
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(10, 3) == 9330);
  CHECK(stirling2(5, 5) == 1);
  CHECK(stirling2(3, 4) == 0);
}

TEST_CASE("exhaustive search finds the brute-force minimum") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 4 + rng() % 3;
    const FirstOrderChain chain(to_matrix(oracle::random_stochastic(n, rng)));
    SearchConfig config;
    config.order = 1 + rep % 2;
    config.n_groups = 2 + rep % 2;
    CostEvaluator eval(chain, config.cost_kind, config.order);
    const SearchResult r = exhaustive_aggregate(chain, config);
    CHECK(r.cost == doctest::Approx(brute_minimum(eval, n, config.n_groups)));
    CHECK(r.partition.n_groups() == config.n_groups);
    CHECK(r.trace.moves == static_cast<std::size_t>(stirling2(n, config.n_groups)));
  }
  SearchConfig big;
  big.n_groups = 5;
  const FirstOrderChain chain(to_matrix([] {
    std::mt19937_64 r(1);
    return oracle::random_stochastic(20, r);
  }()));
  CHECK_THROWS_AS(exhaustive_aggregate(chain, big), Error);
}

TEST_CASE("sequential search: traces, determinism and quality") {
  std::mt19937_64 rng(42);
  std::size_t optimal = 0;
  const std::size_t instances = 30;
  for (std::size_t rep = 0; rep < instances; ++rep) {
    const std::size_t n = 5 + rng() % 4;
    const FirstOrderChain chain(to_matrix(oracle::random_stochastic(n, rng)));
    SearchConfig config;
    config.order = 1 + rep % 2;
    config.n_groups = 2 + rep % 2;
    config.seed = rep;
    const SearchResult a = sequential_aggregate(chain, config);
    for (std::size_t s = 1; s < a.trace.sweep_costs.size(); ++s) {
      CHECK(a.trace.sweep_costs[s] <= a.trace.sweep_costs[s - 1]);
    }
    CHECK(a.restart_costs.size() == config.restarts);
    config.threads = 3;
    const SearchResult b = sequential_aggregate(chain, config);
    CHECK(a.partition == b.partition);
    CHECK(a.cost == b.cost);
    CHECK(a.restart_costs == b.restart_costs);
    const SearchResult ex = exhaustive_aggregate(chain, config);
    CHECK(a.cost >= ex.cost - 1e-12);
    if (a.cost <= ex.cost + 1e-10) ++optimal;
  }
  // Quality gate: ten restarts almost always reach the global optimum here.
  CHECK(optimal >= instances * 9 / 10);
}

TEST_CASE("sequential search recovers a lumpable partition") {
  const std::vector<std::size_t> sizes{3, 3, 2};
  const Matrix a{{0.7, 0.2, 0.1}, {0.3, 0.3, 0.4}, {0.1, 0.1, 0.8}};
  const LabeledChain lc = gen_block_stochastic(sizes, a, 5);
  SearchConfig config;
  config.cost_kind = CostKind::lump;
  config.n_groups = 3;
  config.restarts = 20;
  const SearchResult r = sequential_aggregate(lc.chain, config);
  CHECK(r.cost <= 1e-10);
}

TEST_CASE("agglomerative search") {
  std::mt19937_64 rng(43);
  const FirstOrderChain chain(to_matrix(oracle::random_stochastic(6, rng)));
  SearchConfig config;
  config.n_groups = 2;
  const SearchResult r = agglomerative_aggregate(chain, config);
  CHECK(r.partition.n_groups() == 2);
  CHECK(r.trace.sweep_costs.size() == 5);  // singletons plus four merges
  CHECK(r.trace.sweep_costs.front() == doctest::Approx(0.0));
  CHECK(r.cost >= exhaustive_aggregate(chain, config).cost - 1e-12);
  CHECK(r.cost == doctest::Approx(pred_cost(chain, r.partition, 1)));

  // Three states into two groups: the greedy step is itself exhaustive.
  const FirstOrderChain small(Matrix{{0.1, 0.8, 0.1}, {0.7, 0.2, 0.1}, {0.3, 0.3, 0.4}});
  CHECK(agglomerative_aggregate(small, config).cost ==
        doctest::Approx(exhaustive_aggregate(small, config).cost));

  config.cost_kind = CostKind::lump;
  try {
    agglomerative_aggregate(chain, config);
    FAIL("expected UnsupportedCost");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedCost);
  }
}

TEST_CASE("agglomerative merges stay inside blocks of a permuting block chain") {
  const std::vector<std::size_t> sizes{3, 2, 3};
  const Matrix a{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  const LabeledChain lc = gen_block_stochastic(sizes, a, 2);
  const FirstOrderChain chain = perturb(lc.chain, 1e-3, std::uint64_t{8});
  SearchConfig config;
  config.n_groups = 3;
  const SearchResult r = agglomerative_aggregate(chain, config);
  CHECK(r.partition.same_partition(lc.partition));
  CHECK(r.cost == doctest::Approx(exhaustive_aggregate(chain, config).cost));
}

TEST_CASE("config validation") {
  const FirstOrderChain chain(Matrix{{0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}});
  SearchConfig config;
  config.n_groups = 3;
  CHECK_THROWS_AS(sequential_aggregate(chain, config), Error);
  config.n_groups = 1;
  CHECK_THROWS_AS(sequential_aggregate(chain, config), Error);
  config.n_groups = 2;
  config.restarts = 0;
  CHECK_THROWS_AS(sequential_aggregate(chain, config), Error);
  config.restarts = 1;
  config.order = 6;
  CHECK_THROWS_AS(sequential_aggregate(chain, config), Error);
  config.order = 2;
  CHECK_NOTHROW(sequential_aggregate(chain, config));
}

TEST_CASE("derived seeds are distinct and stable") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(123, 45) == derive_seed(123, 45));
}
