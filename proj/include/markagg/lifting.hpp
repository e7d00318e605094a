#pragma once

// Best k-th order Markov approximation of a projection, and liftings of such
// approximations back to the original alphabet.

#include <cstddef>
#include <vector>

#include "markagg/chain.hpp"
#include "markagg/partition.hpp"
#include "markagg/projection.hpp"

namespace markagg {

struct Aggregation {
  // Q(i_1..i_k -> j) = p(Y_{k+1} = j | Y_1^k = i_1..i_k); the context
  // distribution is the stationary law of Y_1^k.
  HigherOrderChain chain;
  // Contexts of zero probability. Their rows are uniform and carry no mass.
  std::vector<std::size_t> zero_contexts;
};

Aggregation optimal_aggregation(const FirstOrderChain& chain, const PartitionMap& g,
                                std::size_t order, std::size_t cap = kDefaultWindowCap);

// The k-th order chain on the original alphabet that moves to j with
// probability mu_j / mu(g^-1(g(j))) * Q(g(i_1)..g(i_k) -> g(j)).
HigherOrderChain mu_lift(const HigherOrderChain& q, const PartitionMap& g,
                         std::span<const double> mu);

// First-order lifting through P: the mass Q(g(i) -> b) is spread over the
// members of b in proportion to P(i -> j). Throws Error(SupportViolation) if a
// state with positive stationary mass cannot reach a group that Q requires.
FirstOrderChain p_lift_first_order(const HigherOrderChain& q, const PartitionMap& g,
                                   const FirstOrderChain& chain);

// X regarded as an order-k chain: P(i_1..i_k -> j) = P(i_k -> j), with the
// stationary law of X_1^k as its context distribution.
HigherOrderChain viewed_as_order_k(const FirstOrderChain& chain, std::size_t order);

}  // namespace markagg
