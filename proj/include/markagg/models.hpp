#pragma once

// Generators for the synthetic and reliability models, plus continuous-time
// to discrete-time conversion.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "markagg/chain.hpp"
#include "markagg/matrix.hpp"
#include "markagg/partition.hpp"

namespace markagg {

// Entries uniform on [0,1], rows normalized afterwards.
Matrix random_stochastic(std::size_t rows, std::size_t cols, std::mt19937_64& rng);
Matrix random_stochastic(std::size_t rows, std::size_t cols, std::uint64_t seed);

struct LabeledChain {
  FirstOrderChain chain;
  PartitionMap partition;
};

// Block (i, j) of the assembled matrix is a_ij * blocks[i][j], where
// blocks[i][j] is a row-stochastic N_i x N_j matrix.
LabeledChain gen_block_stochastic(std::span<const std::size_t> block_sizes, const Matrix& a,
                                  const std::vector<std::vector<Matrix>>& blocks);
// Same, with every block drawn by random_stochastic.
LabeledChain gen_block_stochastic(std::span<const std::size_t> block_sizes, const Matrix& a,
                                  std::uint64_t seed);

// (1 - eps) * base + eps * e. `e` must be row-stochastic, and irreducible
// whenever eps > 0.
Matrix perturb(const Matrix& base, double eps, const Matrix& e);
FirstOrderChain perturb(const FirstOrderChain& base, double eps, const Matrix& e);
// `e` drawn by random_stochastic from the seed.
FirstOrderChain perturb(const FirstOrderChain& base, double eps, std::uint64_t seed);

// Two blocks of `block_size` states that alternate deterministically:
// [[0, P12], [P21, 0]] with random row-stochastic P12, P21.
LabeledChain gen_quasi_periodic(std::size_t block_size, std::uint64_t seed);

// The six-state example: quasi-lumpable w.r.t. {{1,2},{3,4},{5},{6}} and
// highly 2-predictable w.r.t. {{1,2},{3,4},{5,6}} for small eps.
Matrix toy_base(double p);
FirstOrderChain gen_toy(double p, double eps, const Matrix& e);
FirstOrderChain gen_toy(double p, double eps, std::uint64_t seed);
PartitionMap toy_predictive_partition();
PartitionMap toy_lumpable_partition();

// Generator of a continuous-time chain: nonnegative off-diagonal rates,
// diagonal equal to minus the row sum.
class RateMatrix {
 public:
  explicit RateMatrix(Matrix rates);
  // Off-diagonal rates only; the diagonal is filled in.
  static RateMatrix from_off_diagonal(Matrix rates);

  std::size_t n_states() const noexcept { return rates_.rows(); }
  const Matrix& rates() const noexcept { return rates_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return rates_(i, j); }
  double exit_rate(std::size_t i) const noexcept { return -rates_(i, i); }

 private:
  Matrix rates_;
};

struct MaintenanceRates {
  double lambda_0 = 0.05;  // spontaneous failure
  double lambda_1 = 1.0;   // deterioration
  double lambda_m = 0.3;   // start of maintenance
  double mu_0 = 1.0;       // repair after spontaneous failure
  double mu_1 = 1.0;       // repair after failure by deterioration
  double mu_m = 2.0;       // end of maintenance
};

struct MaintenanceModel {
  RateMatrix rates;
  // {W}, {M_i, D_i} for i = 1..k, {M_{k+1}, F_1}, {F_0}: k + 3 groups.
  PartitionMap reference;
  std::vector<std::string> state_names;
};

// Working state W, deterioration states D_1..D_k, failures F_1 (by
// deterioration) and F_0 (spontaneous), and maintenance states M_1..M_{k+1};
// N = 2k + 4. State order: W, D_1..D_k, F_1, F_0, M_1..M_{k+1}.
MaintenanceModel gen_maintenance(std::size_t k, const MaintenanceRates& rates = {});

// Jump chain: P_ij = q_ij / sum_{l != i} q_il, P_ii = 0.
FirstOrderChain embed_jump_chain(const RateMatrix& rates);

// Sample path of length `steps` started from the stationary distribution.
std::vector<std::size_t> simulate(const FirstOrderChain& chain, std::size_t steps,
                                  std::uint64_t seed);

}  // namespace markagg
