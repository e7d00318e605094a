#pragma once

// Partition search: sequential moves with random restarts, greedy
// agglomerative merging, and exhaustive enumeration for small alphabets.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "markagg/chain.hpp"
#include "markagg/costs.hpp"
#include "markagg/partition.hpp"

namespace markagg {

struct SearchConfig {
  CostKind cost_kind = CostKind::pred;
  std::size_t order = 1;
  std::size_t n_groups = 2;
  std::size_t restarts = 10;
  std::size_t max_sweeps = 100;
  std::uint64_t seed = 0;
  bool forbid_empty_groups = true;
  // Restarts are independent; results do not depend on this value.
  std::size_t threads = 1;
  std::size_t window_cap = kDefaultWindowCap;
};

// Throws Error(InvalidConfig) unless 1 < M < N, restarts >= 1 and the
// windows fit under the cap.
void validate(const SearchConfig& config, std::size_t n_states);

// A move is accepted only if it lowers the cost by more than this.
inline constexpr double kImprovementTolerance = 1e-12;

struct SearchTrace {
  std::size_t restart = 0;
  // Cost after initialization, then after every sweep (sequential) or merge
  // (agglomerative).
  std::vector<double> sweep_costs;
  std::size_t moves = 0;
  bool converged = false;
  std::vector<std::size_t> final_labels;
};

struct SearchResult {
  PartitionMap partition;
  double cost = 0.0;
  CostReport report;
  SearchTrace trace;                  // winning restart
  std::vector<double> restart_costs;  // final cost of every restart
};

// Seed of restart `index`, derived from the master seed by counter.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

// One restart of the sequential heuristic from a seed-derived random
// surjective partition.
SearchTrace sequential_restart(CostEvaluator& evaluate, const SearchConfig& config,
                               std::size_t restart);

// Best of config.restarts sequential runs (lowest cost, then lowest restart).
SearchResult sequential_aggregate(const FirstOrderChain& chain, const SearchConfig& config);

// Greedy merging from singletons down to config.n_groups; pred cost only.
SearchResult agglomerative_aggregate(const FirstOrderChain& chain, const SearchConfig& config);

// Global optimum over all surjective partitions into config.n_groups groups.
SearchResult exhaustive_aggregate(const FirstOrderChain& chain, const SearchConfig& config,
                                  double max_partitions = 1e6);

// Stirling number of the second kind, as a double (saturates to +inf).
double stirling2(std::size_t n, std::size_t k);

}  // namespace markagg
