#pragma once

// First- and higher-order Markov chains on finite alphabets.

#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "markagg/matrix.hpp"

namespace markagg {

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kStationaryTolerance = 1e-10;

namespace detail {
struct LazyVector {
  std::once_flag once;
  std::vector<double> value;
};
}  // namespace detail

// Row-stochastic transition matrix P with a write-once cache of the stationary
// distribution mu (mu^T P = mu^T). Copies share the cache.
class FirstOrderChain {
 public:
  explicit FirstOrderChain(Matrix transitions);
  FirstOrderChain(Matrix transitions, std::vector<double> stationary);

  std::size_t n_states() const noexcept { return transitions_.rows(); }
  const Matrix& transitions() const noexcept { return transitions_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return transitions_(i, j); }
  std::span<const double> row(std::size_t i) const noexcept { return transitions_.row(i); }

  // Solves on first use; throws Error(NotIrreducible) when the chain has more
  // than one closed communicating class.
  const std::vector<double>& stationary() const;

 private:
  Matrix transitions_;
  std::shared_ptr<detail::LazyVector> stationary_;
};

// Order-k chain over M symbols. Contexts (i_1, ..., i_k) are numbered in
// base M with i_1 most significant; row c of the M^k x M tensor holds
// P(i_1..i_k -> j).
class HigherOrderChain {
 public:
  HigherOrderChain(std::size_t order, std::size_t n_states, Matrix transitions);
  HigherOrderChain(std::size_t order, std::size_t n_states, Matrix transitions,
                   std::vector<double> context_dist);

  std::size_t order() const noexcept { return order_; }
  std::size_t n_states() const noexcept { return n_states_; }
  std::size_t n_contexts() const noexcept { return transitions_.rows(); }
  const Matrix& transitions() const noexcept { return transitions_; }
  std::span<const double> row(std::size_t context) const noexcept {
    return transitions_.row(context);
  }

  // Invariant distribution of the k-dimensional context, solved on first use.
  const std::vector<double>& context_dist() const;

  std::size_t context_index(std::span<const std::size_t> symbols) const;
  std::vector<std::size_t> context_symbols(std::size_t context) const;
  // Context reached by appending symbol j and dropping the oldest symbol.
  std::size_t shift(std::size_t context, std::size_t j) const noexcept {
    return (context % stride_) * n_states_ + j;
  }

 private:
  std::size_t order_;
  std::size_t n_states_;
  std::size_t stride_;  // M^(k-1)
  Matrix transitions_;
  std::shared_ptr<detail::LazyVector> context_dist_;
};

// M^k, throwing Error(TooLarge) on overflow past `limit`.
std::size_t checked_power(std::size_t base, std::size_t exponent,
                          std::size_t limit = std::numeric_limits<std::size_t>::max());

// Stationary distribution of a row-stochastic matrix whose support graph has
// exactly one closed communicating class (transient states get mass 0).
std::vector<double> solve_stationary(const Matrix& transitions);

const std::vector<double>& stationary_distribution(const FirstOrderChain& chain);
std::vector<double> stationary_context_dist(const HigherOrderChain& chain);

// First-order chain on M^k windows: ((i_1..i_k) -> (i_2..i_k, j)) carries
// P(i_1..i_k -> j), every other entry is zero.
FirstOrderChain expand_transition_chain(const HigherOrderChain& chain);

// H(X_2 | X_1) under stationarity, in bits.
double entropy_rate(const FirstOrderChain& chain);
// H(Z_{k+1} | Z_1^k) under the invariant context distribution.
double entropy_rate(const HigherOrderChain& chain);

// H(mu) - entropy_rate = I(X_2; X_1).
double redundancy_rate(const FirstOrderChain& chain);

struct KldrResult {
  double value = 0.0;
  // Set when b assigns zero probability to a transition a takes with positive
  // probability; value is then +inf.
  bool support_violation = false;
  std::size_t context = 0;
  std::size_t target = 0;

  bool finite() const noexcept { return !support_violation; }
};

// Kullback-Leibler divergence rate between two chains of equal order and
// alphabet, weighted by a's invariant context distribution.
KldrResult kldr(const HigherOrderChain& a, const HigherOrderChain& b);
KldrResult kldr(const FirstOrderChain& a, const FirstOrderChain& b);

}  // namespace markagg

namespace markagg {

// True when the support digraph of `transitions` is strongly connected.
bool is_irreducible(const Matrix& transitions);

}  // namespace markagg
