#include "markagg/chain.hpp"

#include <cmath>
#include <string>

#include "markagg/error.hpp"
#include "markagg/info.hpp"
#include "markagg/simd/kernels.hpp"

namespace markagg {
namespace {

void validate_stochastic(const Matrix& m, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double v : m.row(r)) {
      if (!(v >= 0.0 && v <= 1.0 + kRowSumTolerance)) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(what) + ": entry outside [0,1] in row " + std::to_string(r));
      }
    }
    const double s = simd::sum(m.row(r));
    if (std::fabs(s - 1.0) > kRowSumTolerance) {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + ": row " + std::to_string(r) +
                                                  " sums to " + std::to_string(s));
    }
  }
}

void validate_distribution(std::span<const double> p, std::size_t expected, const char* what) {
  if (p.size() != expected) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has the wrong length");
  }
  for (double v : p) {
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " is negative");
  }
  if (std::fabs(simd::sum(p) - 1.0) > kStationaryTolerance) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " does not sum to 1");
  }
}

}  // namespace

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > limit / base) {
      throw Error(ErrorKind::TooLarge, std::to_string(base) + "^" + std::to_string(exponent) +
                                           " exceeds " + std::to_string(limit));
    }
    out *= base;
  }
  return out;
}

FirstOrderChain::FirstOrderChain(Matrix transitions)
    : transitions_(std::move(transitions)), stationary_(std::make_shared<detail::LazyVector>()) {
  if (!transitions_.square() || transitions_.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "transition matrix must be square and nonempty");
  }
  validate_stochastic(transitions_, "transition matrix");
}

FirstOrderChain::FirstOrderChain(Matrix transitions, std::vector<double> stationary)
    : FirstOrderChain(std::move(transitions)) {
  validate_distribution(stationary, n_states(), "stationary distribution");
  std::vector<double> next(n_states(), 0.0);
  for (std::size_t i = 0; i < n_states(); ++i) simd::axpy(stationary[i], row(i), next);
  if (simd::l1_distance(next, stationary) > kStationaryTolerance) {
    throw Error(ErrorKind::InvalidArgument, "supplied distribution is not stationary");
  }
  std::call_once(stationary_->once, [&] { stationary_->value = std::move(stationary); });
}

const std::vector<double>& FirstOrderChain::stationary() const {
  std::call_once(stationary_->once, [&] { stationary_->value = solve_stationary(transitions_); });
  return stationary_->value;
}

HigherOrderChain::HigherOrderChain(std::size_t order, std::size_t n_states, Matrix transitions)
    : order_(order),
      n_states_(n_states),
      stride_(1),
      transitions_(std::move(transitions)),
      context_dist_(std::make_shared<detail::LazyVector>()) {
  if (order_ == 0 || n_states_ == 0) {
    throw Error(ErrorKind::InvalidArgument, "order and alphabet size must be positive");
  }
  stride_ = checked_power(n_states_, order_ - 1);
  const std::size_t contexts = checked_power(n_states_, order_);
  if (transitions_.rows() != contexts || transitions_.cols() != n_states_) {
    throw Error(ErrorKind::DimensionMismatch, "transition tensor must have M^k rows and M columns");
  }
  validate_stochastic(transitions_, "transition tensor");
}

HigherOrderChain::HigherOrderChain(std::size_t order, std::size_t n_states, Matrix transitions,
                                   std::vector<double> context_dist)
    : HigherOrderChain(order, n_states, std::move(transitions)) {
  validate_distribution(context_dist, n_contexts(), "context distribution");
  std::vector<double> next(n_contexts(), 0.0);
  for (std::size_t c = 0; c < n_contexts(); ++c) {
    if (context_dist[c] == 0.0) continue;
    for (std::size_t j = 0; j < n_states_; ++j) {
      next[shift(c, j)] += context_dist[c] * transitions_(c, j);
    }
  }
  if (simd::l1_distance(next, context_dist) > kStationaryTolerance) {
    throw Error(ErrorKind::InvalidArgument, "context distribution is not invariant");
  }
  std::call_once(context_dist_->once, [&] { context_dist_->value = std::move(context_dist); });
}

const std::vector<double>& HigherOrderChain::context_dist() const {
  std::call_once(context_dist_->once, [&] { context_dist_->value = stationary_context_dist(*this); });
  return context_dist_->value;
}

std::size_t HigherOrderChain::context_index(std::span<const std::size_t> symbols) const {
  if (symbols.size() != order_) throw Error(ErrorKind::DimensionMismatch, "context length != order");
  std::size_t c = 0;
  for (std::size_t s : symbols) {
    if (s >= n_states_) throw Error(ErrorKind::InvalidArgument, "symbol out of range");
    c = c * n_states_ + s;
  }
  return c;
}

std::vector<std::size_t> HigherOrderChain::context_symbols(std::size_t context) const {
  std::vector<std::size_t> out(order_);
  for (std::size_t i = order_; i-- > 0;) {
    out[i] = context % n_states_;
    context /= n_states_;
  }
  return out;
}

const std::vector<double>& stationary_distribution(const FirstOrderChain& chain) {
  return chain.stationary();
}

std::vector<double> stationary_context_dist(const HigherOrderChain& chain) {
  if (chain.order() == 1) return solve_stationary(chain.transitions());
  return solve_stationary(expand_transition_chain(chain).transitions());
}

FirstOrderChain expand_transition_chain(const HigherOrderChain& chain) {
  const std::size_t contexts = chain.n_contexts();
  if (chain.order() == 1) return FirstOrderChain(chain.transitions());
  Matrix expanded(contexts, contexts);
  for (std::size_t c = 0; c < contexts; ++c) {
    for (std::size_t j = 0; j < chain.n_states(); ++j) {
      expanded(c, chain.shift(c, j)) = chain.transitions()(c, j);
    }
  }
  return FirstOrderChain(std::move(expanded));
}

double entropy_rate(const FirstOrderChain& chain) {
  const auto& mu = chain.stationary();
  double h = 0.0;
  for (std::size_t i = 0; i < chain.n_states(); ++i) {
    if (mu[i] > 0.0) h += mu[i] * entropy(chain.row(i));
  }
  return h;
}

double entropy_rate(const HigherOrderChain& chain) {
  const auto& p = chain.context_dist();
  double h = 0.0;
  for (std::size_t c = 0; c < chain.n_contexts(); ++c) {
    if (p[c] > 0.0) h += p[c] * entropy(chain.row(c));
  }
  return h;
}

double redundancy_rate(const FirstOrderChain& chain) {
  return entropy(chain.stationary()) - entropy_rate(chain);
}

KldrResult kldr(const HigherOrderChain& a, const HigherOrderChain& b) {
  if (a.order() != b.order() || a.n_states() != b.n_states()) {
    throw Error(ErrorKind::DimensionMismatch, "KLDR needs chains of equal order and alphabet");
  }
  const auto& p = a.context_dist();
  KldrResult out;
  for (std::size_t c = 0; c < a.n_contexts(); ++c) {
    if (p[c] <= 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < a.n_states(); ++j) {
      const double pa = a.transitions()(c, j);
      const double pb = b.transitions()(c, j);
      if (pa > 0.0 && pb <= 0.0) {
        out.value = std::numeric_limits<double>::infinity();
        out.support_violation = true;
        out.context = c;
        out.target = j;
        return out;
      }
      row += divergence_term(pa, pb);
    }
    out.value += p[c] * row;
  }
  return out;
}

KldrResult kldr(const FirstOrderChain& a, const FirstOrderChain& b) {
  if (a.n_states() != b.n_states()) {
    throw Error(ErrorKind::DimensionMismatch, "KLDR needs chains on the same alphabet");
  }
  const HigherOrderChain ha(1, a.n_states(), a.transitions(), a.stationary());
  const HigherOrderChain hb(1, b.n_states(), b.transitions());
  return kldr(ha, hb);
}

}  // namespace markagg
