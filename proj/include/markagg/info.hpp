#pragma once

// Information measures in bits, with 0 log 0 = 0 and p log(p/0) = +inf.

#include <cmath>
#include <limits>
#include <span>

namespace markagg {

inline double neg_plogp(double p) noexcept { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// p * log2(p / q)
inline double divergence_term(double p, double q) noexcept {
  if (p <= 0.0) return 0.0;
  if (q <= 0.0) return std::numeric_limits<double>::infinity();
  return p * std::log2(p / q);
}

double entropy(std::span<const double> p) noexcept;

double binary_entropy(double p) noexcept;

// Entropy of a joint whose trailing coordinate has `inner` values, minus the
// entropy of the marginal over the leading coordinates: H(last | leading).
double conditional_entropy_last(std::span<const double> joint, std::size_t inner);

}  // namespace markagg
