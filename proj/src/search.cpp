#include "markagg/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "markagg/error.hpp"
#include "markagg/parallel.hpp"

namespace markagg {
namespace {

// Renumbers labels so that no group is empty; returns the group count.
std::size_t compact(std::vector<std::size_t>& labels, std::size_t n_groups) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(n_groups, kUnset);
  std::vector<bool> used(n_groups, false);
  for (std::size_t l : labels) used[l] = true;
  std::size_t next = 0;
  for (std::size_t b = 0; b < n_groups; ++b) {
    if (used[b]) remap[b] = next++;
  }
  for (auto& l : labels) l = remap[l];
  return next;
}

SearchResult finish(const FirstOrderChain& chain, const SearchConfig& config, SearchTrace trace,
                    double cost, std::vector<double> restart_costs) {
  std::vector<std::size_t> labels = trace.final_labels;
  const std::size_t groups = compact(labels, config.n_groups);
  if (groups != config.n_groups) {
    warn("search ended with " + std::to_string(config.n_groups - groups) + " empty group(s)");
  }
  PartitionMap partition(std::move(labels), groups);
  CostReport report = evaluate_costs(chain, partition, config.order, config.window_cap);
  return {std::move(partition), cost, report, std::move(trace), std::move(restart_costs)};
}

}  // namespace

void validate(const SearchConfig& config, std::size_t n_states) {
  if (config.n_groups <= 1 || config.n_groups >= n_states) {
    throw Error(ErrorKind::InvalidConfig, "need 1 < groups < states (groups=" +
                                              std::to_string(config.n_groups) +
                                              ", states=" + std::to_string(n_states) + ")");
  }
  if (config.restarts == 0) throw Error(ErrorKind::InvalidConfig, "restarts must be >= 1");
  if (config.order == 0) throw Error(ErrorKind::InvalidConfig, "order must be >= 1");
  if (config.max_sweeps == 0) throw Error(ErrorKind::InvalidConfig, "max_sweeps must be >= 1");
  if (config.order + 1 > config.window_cap) {
    throw Error(ErrorKind::InvalidConfig, "order + 1 exceeds the window cap");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  // splitmix64 finalizer over (master, index)
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SearchTrace sequential_restart(CostEvaluator& evaluate, const SearchConfig& config,
                               std::size_t restart) {
  const std::size_t n = evaluate.chain().n_states();
  const std::size_t m = config.n_groups;
  std::mt19937_64 rng(derive_seed(config.seed, restart));

  // One random state per group first, so the start is surjective.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> labels(n);
  std::uniform_int_distribution<std::size_t> pick_group(0, m - 1);
  for (std::size_t i = 0; i < n; ++i) labels[order[i]] = i < m ? i : pick_group(rng);
  std::vector<std::size_t> sizes(m, 0);
  for (std::size_t l : labels) ++sizes[l];

  SearchTrace trace;
  trace.restart = restart;
  double cost = evaluate(labels, m);
  trace.sweep_costs.push_back(cost);

  for (std::size_t sweep = 0; sweep < config.max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t moved = 0;
    for (std::size_t x : order) {
      const std::size_t current = labels[x];
      if (config.forbid_empty_groups && sizes[current] == 1) continue;
      std::size_t best_group = current;
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < m; ++b) {
        if (b == current) continue;
        labels[x] = b;
        const double c = evaluate(labels, m);
        if (c < best_cost) {
          best_cost = c;
          best_group = b;
        }
      }
      if (best_cost < cost - kImprovementTolerance) {
        labels[x] = best_group;
        --sizes[current];
        ++sizes[best_group];
        cost = best_cost;
        ++moved;
      } else {
        labels[x] = current;
      }
    }
    trace.moves += moved;
    trace.sweep_costs.push_back(cost);
    if (moved == 0) {
      trace.converged = true;
      break;
    }
  }
  trace.final_labels = std::move(labels);
  return trace;
}

SearchResult sequential_aggregate(const FirstOrderChain& chain, const SearchConfig& config) {
  validate(config, chain.n_states());
  chain.stationary();
  std::vector<SearchTrace> traces(config.restarts);
  parallel_for(config.restarts, config.threads, [&](std::size_t r) {
    CostEvaluator evaluate(chain, config.cost_kind, config.order, config.window_cap);
    traces[r] = sequential_restart(evaluate, config, r);
  });
  std::vector<double> finals;
  std::size_t best = 0;
  for (std::size_t r = 0; r < traces.size(); ++r) {
    finals.push_back(traces[r].sweep_costs.back());
    if (finals[r] < finals[best]) best = r;
  }
  const double cost = finals[best];
  return finish(chain, config, std::move(traces[best]), cost, std::move(finals));
}

SearchResult agglomerative_aggregate(const FirstOrderChain& chain, const SearchConfig& config) {
  if (config.cost_kind != CostKind::pred) {
    throw Error(ErrorKind::UnsupportedCost,
                "agglomerative search needs a cost that is monotone under refinement (pred)");
  }
  validate(config, chain.n_states());
  const std::size_t n = chain.n_states();
  CostEvaluator evaluate(chain, config.cost_kind, config.order, config.window_cap);

  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  std::size_t groups = n;
  SearchTrace trace;
  trace.sweep_costs.push_back(evaluate(labels, groups));

  std::vector<std::size_t> candidate(n);
  while (groups > config.n_groups) {
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    for (std::size_t a = 0; a < groups; ++a) {
      for (std::size_t b = a + 1; b < groups; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t l = labels[i];
          candidate[i] = l == b ? a : (l > b ? l - 1 : l);
        }
        const double c = evaluate(candidate, groups - 1);
        if (c < best_cost) {
          best_cost = c;
          best_a = a;
          best_b = b;
        }
      }
    }
    for (auto& l : labels) l = l == best_b ? best_a : (l > best_b ? l - 1 : l);
    --groups;
    ++trace.moves;
    trace.sweep_costs.push_back(best_cost);
  }
  trace.converged = true;
  trace.final_labels = labels;
  const double cost = trace.sweep_costs.back();
  return finish(chain, config, std::move(trace), cost, {cost});
}

double stirling2(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  // S(i, j) = j S(i-1, j) + S(i-1, j-1)
  std::vector<double> row(k + 1, 0.0);
  row[0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = std::min(i, k); j >= 1; --j) {
      row[j] = static_cast<double>(j) * row[j] + row[j - 1];
    }
    row[0] = 0.0;
  }
  return row[k];
}

SearchResult exhaustive_aggregate(const FirstOrderChain& chain, const SearchConfig& config,
                                  double max_partitions) {
  validate(config, chain.n_states());
  const std::size_t n = chain.n_states();
  const std::size_t m = config.n_groups;
  const double count = stirling2(n, m);
  if (count > max_partitions) {
    throw Error(ErrorKind::TooLarge, "S(" + std::to_string(n) + "," + std::to_string(m) +
                                         ") = " + std::to_string(count) + " partitions");
  }
  CostEvaluator evaluate(chain, config.cost_kind, config.order, config.window_cap);

  // Restricted growth strings with exactly m blocks: labels[0] = 0 and each
  // label is at most one more than the running maximum.
  std::vector<std::size_t> labels(n, 0);
  std::vector<std::size_t> best_labels;
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t enumerated = 0;
  auto visit = [&](auto&& self, std::size_t pos, std::size_t max_label) -> void {
    if (pos == n) {
      if (max_label + 1 != m) return;
      ++enumerated;
      const double c = evaluate(labels, m);
      if (c < best_cost) {
        best_cost = c;
        best_labels = labels;
      }
      return;
    }
    const std::size_t remaining = n - pos;
    for (std::size_t l = 0; l <= std::min(max_label + 1, m - 1); ++l) {
      const std::size_t new_max = std::max(max_label, l);
      if (m - 1 - new_max > remaining - 1) continue;
      labels[pos] = l;
      self(self, pos + 1, new_max);
    }
  };
  visit(visit, 1, 0);

  SearchTrace trace;
  trace.moves = enumerated;
  trace.converged = true;
  trace.sweep_costs.push_back(best_cost);
  trace.final_labels = best_labels;
  return finish(chain, config, std::move(trace), best_cost, {best_cost});
}

}  // namespace markagg
