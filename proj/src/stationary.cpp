#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "markagg/chain.hpp"
#include "markagg/error.hpp"
#include "markagg/simd/kernels.hpp"

namespace markagg {
namespace {

// Tarjan's algorithm; returns the component id of every vertex.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& adj,
                                            std::size_t& n_components) {
  const std::size_t n = adj.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  n_components = 0;

  // Iterative DFS: frames hold (vertex, next edge position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        const std::size_t w = adj[v][pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = n_components;
        } while (w != v);
        ++n_components;
      }
      const std::size_t finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

double residual_l1(const Matrix& p, const std::vector<std::size_t>& states,
                   const Eigen::VectorXd& mu) {
  const std::size_t n = states.size();
  Eigen::VectorXd next = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) next[b] += mu[a] * p(states[a], states[b]);
  }
  return (next - mu).lpNorm<1>();
}

Eigen::VectorXd power_iteration(const Eigen::MatrixXd& sub) {
  const Eigen::Index n = sub.rows();
  // (P + I) / 2 is aperiodic and has the same stationary vector.
  const Eigen::MatrixXd lazy = 0.5 * (sub + Eigen::MatrixXd::Identity(n, n));
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int iter = 0; iter < 1'000'000; ++iter) {
    Eigen::RowVectorXd next = mu * lazy;
    next /= next.sum();
    const double change = (next - mu).lpNorm<1>();
    mu = next;
    if (change < 1e-16) break;
  }
  return mu.transpose();
}

std::vector<std::vector<std::size_t>> support_graph(const Matrix& p) {
  std::vector<std::vector<std::size_t>> adj(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) adj[i].push_back(j);
    }
  }
  return adj;
}

}  // namespace

bool is_irreducible(const Matrix& transitions) {
  if (!transitions.square() || transitions.rows() == 0) return false;
  std::size_t n_comp = 0;
  strongly_connected(support_graph(transitions), n_comp);
  return n_comp == 1;
}

std::vector<double> solve_stationary(const Matrix& p) {
  if (!p.square() || p.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "transition matrix must be square and nonempty");
  }
  const std::size_t n = p.rows();
  const auto adj = support_graph(p);
  std::size_t n_comp = 0;
  const auto comp = strongly_connected(adj, n_comp);
  std::vector<bool> closed(n_comp, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : adj[i]) {
      if (comp[j] != comp[i]) closed[comp[i]] = false;
    }
  }
  const auto n_closed = static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
  if (n_closed != 1) {
    throw Error(ErrorKind::NotIrreducible,
                std::to_string(n_closed) + " closed communicating classes in the support graph");
  }
  const std::size_t target = static_cast<std::size_t>(
      std::distance(closed.begin(), std::find(closed.begin(), closed.end(), true)));
  std::vector<std::size_t> states;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] == target) states.push_back(i);
  }

  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = p(states[a], states[b]);
  }
  // Balance equations (P^T - I) mu = 0 with the last (redundant) row replaced
  // by the normalization constraint.
  Eigen::MatrixXd system = sub.transpose() - Eigen::MatrixXd::Identity(m, m);
  system.row(m - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs[m - 1] = 1.0;

  Eigen::VectorXd mu;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (lu.isInvertible()) {
    mu = lu.solve(rhs);
    // One step of iterative refinement.
    mu += lu.solve(rhs - system * mu);
  }
  if (mu.size() == 0 || !mu.allFinite() || residual_l1(p, states, mu) > 1e-12 ||
      mu.minCoeff() < -1e-12) {
    mu = power_iteration(sub);
  }
  mu = mu.cwiseMax(0.0);
  mu /= mu.sum();

  std::vector<double> out(n, 0.0);
  for (Eigen::Index a = 0; a < m; ++a) out[states[a]] = mu[a];
  return out;
}

}  // namespace markagg
