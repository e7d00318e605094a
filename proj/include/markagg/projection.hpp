#pragma once

// Exact finite-window distributions of the projected process Y_n = g(X_n)
// under the stationary law of X.

#include <cstddef>
#include <span>
#include <vector>

#include "markagg/chain.hpp"
#include "markagg/matrix.hpp"
#include "markagg/partition.hpp"

namespace markagg {

inline constexpr std::size_t kDefaultWindowCap = 6;

// Joint pmf of a window of length L. The leading coordinate ranges over
// `lead_extent` values (M for Y_1, or N when keyed by X_1); the remaining
// L-1 coordinates range over the M groups. Flat index is
// lead * M^(L-1) + (y_2 .. y_L read in base M).
struct JointDist {
  std::size_t window_length = 0;
  std::size_t lead_extent = 0;
  std::size_t n_groups = 0;
  bool keyed = false;
  std::vector<double> probabilities;

  std::size_t tail_extent() const noexcept { return probabilities.size() / lead_extent; }

  // Marginal over the first L-1 coordinates.
  JointDist drop_last() const;
  // Marginal over the last L-1 coordinates of an unkeyed window.
  JointDist drop_first() const;
};

// Scratch buffers for the forward recursion; reuse across calls to avoid
// reallocating inside search loops.
class ForwardWorkspace {
 public:
  std::vector<double>& front() noexcept { return front_; }
  std::vector<double>& back() noexcept { return back_; }

 private:
  std::vector<double> front_;
  std::vector<double> back_;
};

// Forward recursion over (window prefix, current state). `lead` bins X_1 into
// `lead_extent` classes; later coordinates are binned by `labels` into
// `n_groups` classes (empty groups are allowed here). Result has
// lead_extent * n_groups^(L-1) entries.
void forward_window(const FirstOrderChain& chain, std::span<const std::size_t> lead,
                    std::size_t lead_extent, std::span<const std::size_t> labels,
                    std::size_t n_groups, std::size_t window_length, std::vector<double>& out,
                    ForwardWorkspace& workspace);

// Distribution of (g(X_1), ..., g(X_L)).
JointDist project_joint(const FirstOrderChain& chain, const PartitionMap& g,
                        std::size_t window_length, std::size_t cap = kDefaultWindowCap);

// Distribution of (X_1, g(X_2), ..., g(X_{k+1})).
JointDist project_joint_keyed(const FirstOrderChain& chain, const PartitionMap& g,
                              std::size_t order, std::size_t cap = kDefaultWindowCap);

}  // namespace markagg
