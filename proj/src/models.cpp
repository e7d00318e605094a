#include "markagg/models.hpp"

#include <cmath>
#include <string>

#include "markagg/error.hpp"
#include "markagg/simd/kernels.hpp"

namespace markagg {

Matrix random_stochastic(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = m.row(r);
    for (auto& v : row) v = unit(rng);
    const double total = simd::sum(row);
    simd::scale(1.0 / total, row);
  }
  return m;
}

Matrix random_stochastic(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_stochastic(rows, cols, rng);
}

LabeledChain gen_block_stochastic(std::span<const std::size_t> block_sizes, const Matrix& a,
                                  const std::vector<std::vector<Matrix>>& blocks) {
  const std::size_t m = block_sizes.size();
  if (m == 0 || a.rows() != m || a.cols() != m || blocks.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "A and the block grid must be M x M");
  }
  if (max_row_sum_error(a) > kRowSumTolerance) {
    throw Error(ErrorKind::InvalidArgument, "A must be row stochastic");
  }
  std::vector<std::size_t> offset(m + 1, 0);
  for (std::size_t b = 0; b < m; ++b) {
    if (block_sizes[b] == 0) throw Error(ErrorKind::DimensionMismatch, "empty block");
    offset[b + 1] = offset[b] + block_sizes[b];
  }
  const std::size_t n = offset[m];
  Matrix p(n, n);
  for (std::size_t bi = 0; bi < m; ++bi) {
    if (blocks[bi].size() != m) throw Error(ErrorKind::DimensionMismatch, "ragged block grid");
    for (std::size_t bj = 0; bj < m; ++bj) {
      const Matrix& block = blocks[bi][bj];
      if (block.rows() != block_sizes[bi] || block.cols() != block_sizes[bj]) {
        throw Error(ErrorKind::DimensionMismatch, "block (" + std::to_string(bi) + "," +
                                                      std::to_string(bj) + ") has wrong shape");
      }
      if (max_row_sum_error(block) > kRowSumTolerance) {
        throw Error(ErrorKind::InvalidArgument, "blocks must be row stochastic");
      }
      for (std::size_t r = 0; r < block.rows(); ++r) {
        for (std::size_t c = 0; c < block.cols(); ++c) {
          p(offset[bi] + r, offset[bj] + c) = a(bi, bj) * block(r, c);
        }
      }
    }
  }
  return {FirstOrderChain(std::move(p)), PartitionMap::blocks(block_sizes)};
}

LabeledChain gen_block_stochastic(std::span<const std::size_t> block_sizes, const Matrix& a,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Matrix>> blocks(block_sizes.size());
  for (std::size_t bi = 0; bi < block_sizes.size(); ++bi) {
    for (std::size_t bj = 0; bj < block_sizes.size(); ++bj) {
      blocks[bi].push_back(random_stochastic(block_sizes[bi], block_sizes[bj], rng));
    }
  }
  return gen_block_stochastic(block_sizes, a, blocks);
}

Matrix perturb(const Matrix& base, double eps, const Matrix& e) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "eps must be in [0,1]");
  if (base.rows() != e.rows() || base.cols() != e.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "perturbation has a different shape");
  }
  if (max_row_sum_error(e) > kRowSumTolerance) {
    throw Error(ErrorKind::InvalidArgument, "perturbation must be row stochastic");
  }
  if (eps > 0.0 && !is_irreducible(e)) {
    throw Error(ErrorKind::InvalidArgument, "perturbation must be irreducible");
  }
  Matrix out = base;
  simd::scale(1.0 - eps, out.data());
  simd::axpy(eps, e.data(), out.data());
  // Re-normalize so that rounding never pushes a row outside tolerance.
  for (std::size_t r = 0; r < out.rows(); ++r) {
    simd::scale(1.0 / simd::sum(out.row(r)), out.row(r));
  }
  return out;
}

FirstOrderChain perturb(const FirstOrderChain& base, double eps, const Matrix& e) {
  return FirstOrderChain(perturb(base.transitions(), eps, e));
}

FirstOrderChain perturb(const FirstOrderChain& base, double eps, std::uint64_t seed) {
  const std::size_t n = base.n_states();
  return perturb(base, eps, random_stochastic(n, n, seed));
}

LabeledChain gen_quasi_periodic(std::size_t block_size, std::uint64_t seed) {
  if (block_size == 0) throw Error(ErrorKind::InvalidArgument, "block size must be positive");
  const std::size_t sizes[] = {block_size, block_size};
  const Matrix swap{{0.0, 1.0}, {1.0, 0.0}};
  std::mt19937_64 rng(seed);
  const Matrix zero(block_size, block_size);
  Matrix p12 = random_stochastic(block_size, block_size, rng);
  Matrix p21 = random_stochastic(block_size, block_size, rng);
  // Diagonal blocks are scaled by a_ii = 0, so any stochastic placeholder works.
  const Matrix placeholder = Matrix::identity(block_size);
  return gen_block_stochastic(sizes, swap, {{placeholder, p12}, {p21, placeholder}});
}

Matrix toy_base(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be in [0,1]");
  Matrix m(6, 6);
  m(0, 2) = 1.0;
  m(1, 3) = 1.0;
  m(2, 4) = 1.0;
  m(3, 4) = 1.0;
  m(4, 0) = p;
  m(4, 1) = 1.0 - p;
  m(5, 5) = 1.0;
  return m;
}

FirstOrderChain gen_toy(double p, double eps, const Matrix& e) {
  return FirstOrderChain(perturb(toy_base(p), eps, e));
}

FirstOrderChain gen_toy(double p, double eps, std::uint64_t seed) {
  return gen_toy(p, eps, random_stochastic(6, 6, seed));
}

PartitionMap toy_predictive_partition() { return {{0, 0, 1, 1, 2, 2}, 3}; }
PartitionMap toy_lumpable_partition() { return {{0, 0, 1, 1, 2, 3}, 4}; }

RateMatrix::RateMatrix(Matrix rates) : rates_(std::move(rates)) {
  if (!rates_.square() || rates_.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "rate matrix must be square and nonempty");
  }
  for (std::size_t i = 0; i < rates_.rows(); ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < rates_.cols(); ++j) {
      if (i == j) continue;
      if (!(rates_(i, j) >= 0.0) || !std::isfinite(rates_(i, j))) {
        throw Error(ErrorKind::InvalidRates, "negative or non-finite off-diagonal rate");
      }
      off += rates_(i, j);
    }
    if (std::fabs(rates_(i, i) + off) > 1e-9 * std::max(1.0, off)) {
      throw Error(ErrorKind::InvalidRates, "row " + std::to_string(i) + " does not sum to zero");
    }
  }
}

RateMatrix RateMatrix::from_off_diagonal(Matrix rates) {
  for (std::size_t i = 0; i < rates.rows() && rates.square(); ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < rates.cols(); ++j) {
      if (j != i) off += rates(i, j);
    }
    rates(i, i) = -off;
  }
  return RateMatrix(std::move(rates));
}

MaintenanceModel gen_maintenance(std::size_t k, const MaintenanceRates& r) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "need at least one deterioration step");
  for (double v : {r.lambda_0, r.lambda_1, r.lambda_m, r.mu_0, r.mu_1, r.mu_m}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidRates, "all maintenance rates must be positive");
    }
  }
  const std::size_t n = 2 * k + 4;
  const std::size_t w = 0;
  auto d = [](std::size_t i) { return i; };  // D_i, i = 1..k
  const std::size_t f1 = k + 1;
  const std::size_t f0 = k + 2;
  auto maint = [k](std::size_t i) { return k + 2 + i; };  // M_i, i = 1..k+1
  // D_0 is the working state.
  auto level = [&](std::size_t i) { return i == 0 ? w : d(i); };

  Matrix q(n, n);
  for (std::size_t i = 0; i <= k; ++i) {
    const std::size_t from = level(i);
    q(from, i == k ? f1 : d(i + 1)) += r.lambda_1;
    q(from, maint(i + 1)) += r.lambda_m;
    q(from, f0) += r.lambda_0;
  }
  // Maintenance entered from level i-1 revokes one deterioration step.
  for (std::size_t i = 1; i <= k + 1; ++i) {
    q(maint(i), level(i >= 2 ? i - 2 : 0)) += r.mu_m;
  }
  q(f0, w) += r.mu_0;
  q(f1, w) += r.mu_1;

  std::vector<std::size_t> labels(n);
  labels[w] = 0;
  for (std::size_t i = 1; i <= k; ++i) labels[d(i)] = i;
  for (std::size_t i = 1; i <= k + 1; ++i) labels[maint(i)] = i;
  labels[f1] = k + 1;
  labels[f0] = k + 2;

  std::vector<std::string> names(n);
  names[w] = "W";
  for (std::size_t i = 1; i <= k; ++i) names[d(i)] = "D" + std::to_string(i);
  names[f1] = "F1";
  names[f0] = "F0";
  for (std::size_t i = 1; i <= k + 1; ++i) names[maint(i)] = "M" + std::to_string(i);

  return {RateMatrix::from_off_diagonal(std::move(q)), PartitionMap(std::move(labels), k + 3),
          std::move(names)};
}

FirstOrderChain embed_jump_chain(const RateMatrix& rates) {
  const std::size_t n = rates.n_states();
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double exit = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) exit += rates(i, j);
    }
    if (!(exit > 0.0)) {
      throw Error(ErrorKind::AbsorbingState, "state " + std::to_string(i) + " has no exit rate");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) p(i, j) = rates(i, j) / exit;
    }
  }
  return FirstOrderChain(std::move(p));
}

std::vector<std::size_t> simulate(const FirstOrderChain& chain, std::size_t steps,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> path;
  path.reserve(steps);
  if (steps == 0) return path;
  const auto& mu = chain.stationary();
  std::discrete_distribution<std::size_t> start(mu.begin(), mu.end());
  std::vector<std::discrete_distribution<std::size_t>> rows;
  rows.reserve(chain.n_states());
  for (std::size_t i = 0; i < chain.n_states(); ++i) {
    rows.emplace_back(chain.row(i).begin(), chain.row(i).end());
  }
  std::size_t x = start(rng);
  path.push_back(x);
  for (std::size_t t = 1; t < steps; ++t) {
    x = rows[x](rng);
    path.push_back(x);
  }
  return path;
}

}  // namespace markagg
