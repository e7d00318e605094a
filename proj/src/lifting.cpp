#include "markagg/lifting.hpp"

#include <string>

#include "markagg/error.hpp"
#include "markagg/simd/kernels.hpp"

namespace markagg {

Aggregation optimal_aggregation(const FirstOrderChain& chain, const PartitionMap& g,
                                std::size_t order, std::size_t cap) {
  if (order == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
  const JointDist joint = project_joint(chain, g, order + 1, cap);
  const std::size_t m = g.n_groups();
  const std::size_t contexts = joint.probabilities.size() / m;

  Matrix q(contexts, m);
  std::vector<double> context_dist(contexts, 0.0);
  std::vector<std::size_t> zero_contexts;
  for (std::size_t c = 0; c < contexts; ++c) {
    const auto row = std::span<const double>(joint.probabilities).subspan(c * m, m);
    const double mass = simd::sum(row);
    context_dist[c] = mass;
    if (mass <= 0.0) {
      zero_contexts.push_back(c);
      for (std::size_t j = 0; j < m; ++j) q(c, j) = 1.0 / static_cast<double>(m);
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) q(c, j) = row[j] / mass;
  }
  const double total = simd::sum(context_dist);
  simd::scale(1.0 / total, context_dist);
  return {HigherOrderChain(order, m, std::move(q), std::move(context_dist)),
          std::move(zero_contexts)};
}

HigherOrderChain mu_lift(const HigherOrderChain& q, const PartitionMap& g,
                         std::span<const double> mu) {
  const std::size_t n = g.n_states();
  const std::size_t m = g.n_groups();
  if (q.n_states() != m || mu.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "aggregation, partition and mu are incompatible");
  }
  const std::size_t k = q.order();
  const std::size_t contexts = checked_power(n, k);

  std::vector<double> group_mass(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) group_mass[g[j]] += mu[j];
  const auto sizes = g.group_sizes();
  std::vector<double> within(n);
  for (std::size_t j = 0; j < n; ++j) {
    within[j] = group_mass[g[j]] > 0.0 ? mu[j] / group_mass[g[j]]
                                       : 1.0 / static_cast<double>(sizes[g[j]]);
  }

  Matrix lifted(contexts, n);
  std::vector<std::size_t> symbols(k, 0);
  for (std::size_t c = 0; c < contexts; ++c) {
    // symbols holds the base-n digits of c; track the projected context.
    std::size_t projected = 0;
    for (std::size_t s : symbols) projected = projected * m + g[s];
    const auto qrow = q.row(projected);
    for (std::size_t j = 0; j < n; ++j) lifted(c, j) = within[j] * qrow[g[j]];
    for (std::size_t pos = k; pos-- > 0;) {
      if (++symbols[pos] < n) break;
      symbols[pos] = 0;
    }
  }
  return HigherOrderChain(k, n, std::move(lifted));
}

FirstOrderChain p_lift_first_order(const HigherOrderChain& q, const PartitionMap& g,
                                   const FirstOrderChain& chain) {
  if (q.order() != 1) throw Error(ErrorKind::InvalidArgument, "P-lifting needs a first-order Q");
  const std::size_t n = chain.n_states();
  const std::size_t m = g.n_groups();
  if (q.n_states() != m || g.n_states() != n) {
    throw Error(ErrorKind::DimensionMismatch, "aggregation, partition and chain are incompatible");
  }
  const auto& mu = chain.stationary();
  const auto sizes = g.group_sizes();
  Matrix lifted(n, n);
  std::vector<double> arrival(m);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(arrival.begin(), arrival.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) arrival[g[j]] += chain(i, j);
    const auto qrow = q.row(g[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t b = g[j];
      if (qrow[b] == 0.0) continue;
      if (arrival[b] > 0.0) {
        lifted(i, j) = qrow[b] * chain(i, j) / arrival[b];
      } else if (mu[i] > 0.0) {
        throw Error(ErrorKind::SupportViolation,
                    "state " + std::to_string(i) + " cannot reach group " + std::to_string(b));
      } else {
        lifted(i, j) = qrow[b] / static_cast<double>(sizes[b]);
      }
    }
  }
  return FirstOrderChain(std::move(lifted));
}

HigherOrderChain viewed_as_order_k(const FirstOrderChain& chain, std::size_t order) {
  if (order == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
  const std::size_t n = chain.n_states();
  const std::size_t contexts = checked_power(n, order);
  Matrix tensor(contexts, n);
  for (std::size_t c = 0; c < contexts; ++c) {
    const auto src = chain.row(c % n);
    std::copy(src.begin(), src.end(), tensor.row(c).begin());
  }
  // p(i_1..i_k) = mu_{i_1} * prod_t P(i_t -> i_{t+1}), grown one symbol at a time.
  const auto& mu = chain.stationary();
  std::vector<double> context_dist(mu.begin(), mu.end());
  for (std::size_t len = 2; len <= order; ++len) {
    std::vector<double> longer(context_dist.size() * n);
    for (std::size_t c = 0; c < context_dist.size(); ++c) {
      for (std::size_t j = 0; j < n; ++j) longer[c * n + j] = context_dist[c] * chain(c % n, j);
    }
    context_dist = std::move(longer);
  }
  return HigherOrderChain(order, n, std::move(tensor), std::move(context_dist));
}

}  // namespace markagg
