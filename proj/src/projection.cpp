#include "markagg/projection.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "markagg/error.hpp"
#include "markagg/simd/kernels.hpp"

namespace markagg {
namespace {

void check_window(std::size_t length, std::size_t cap) {
  if (length == 0) throw Error(ErrorKind::InvalidArgument, "window length must be positive");
  if (length > cap) {
    throw Error(ErrorKind::WindowTooLarge,
                "window " + std::to_string(length) + " exceeds cap " + std::to_string(cap));
  }
}

void check_compatible(const FirstOrderChain& chain, const PartitionMap& g) {
  if (chain.n_states() != g.n_states()) {
    throw Error(ErrorKind::DimensionMismatch, "partition size differs from chain size");
  }
}

}  // namespace

JointDist JointDist::drop_last() const {
  if (window_length < 2) throw Error(ErrorKind::InvalidArgument, "window too short to marginalize");
  JointDist out{window_length - 1, lead_extent, n_groups, keyed, {}};
  out.probabilities.assign(probabilities.size() / n_groups, 0.0);
  for (std::size_t i = 0; i < out.probabilities.size(); ++i) {
    out.probabilities[i] =
        simd::sum(std::span<const double>(probabilities).subspan(i * n_groups, n_groups));
  }
  return out;
}

JointDist JointDist::drop_first() const {
  if (window_length < 2 || keyed) {
    throw Error(ErrorKind::InvalidArgument, "drop_first needs an unkeyed window of length >= 2");
  }
  const std::size_t tail = tail_extent();
  JointDist out{window_length - 1, n_groups, n_groups, false, std::vector<double>(tail, 0.0)};
  for (std::size_t lead = 0; lead < lead_extent; ++lead) {
    simd::axpy(1.0, std::span<const double>(probabilities).subspan(lead * tail, tail),
               out.probabilities);
  }
  return out;
}

void forward_window(const FirstOrderChain& chain, std::span<const std::size_t> lead,
                    std::size_t lead_extent, std::span<const std::size_t> g, std::size_t m,
                    std::size_t window_length, std::vector<double>& out,
                    ForwardWorkspace& workspace) {
  const std::size_t n = chain.n_states();
  const auto& mu = chain.stationary();

  // alpha[r * n + x] = P(prefix r, X_t = x). The prefix r encodes the binned
  // coordinates strictly before time t; the bin of X_t itself is implied by x.
  auto& alpha = workspace.front();
  auto& next = workspace.back();
  std::size_t prefixes = 1;
  alpha.assign(mu.begin(), mu.end());

  for (std::size_t t = 1; t < window_length; ++t) {
    const std::size_t next_prefixes = t == 1 ? lead_extent : prefixes * m;
    next.assign(next_prefixes * n, 0.0);
    for (std::size_t r = 0; r < prefixes; ++r) {
      for (std::size_t x = 0; x < n; ++x) {
        const double a = alpha[r * n + x];
        if (a == 0.0) continue;
        const std::size_t bin = t == 1 ? lead[x] : r * m + g[x];
        simd::axpy(a, chain.row(x), std::span<double>(next).subspan(bin * n, n));
      }
    }
    std::swap(alpha, next);
    prefixes = next_prefixes;
  }

  if (window_length == 1) {
    out.assign(lead_extent, 0.0);
    for (std::size_t x = 0; x < n; ++x) out[lead[x]] += alpha[x];
    return;
  }
  out.assign(prefixes * m, 0.0);
  for (std::size_t r = 0; r < prefixes; ++r) {
    for (std::size_t x = 0; x < n; ++x) out[r * m + g[x]] += alpha[r * n + x];
  }
}

JointDist project_joint(const FirstOrderChain& chain, const PartitionMap& g,
                        std::size_t window_length, std::size_t cap) {
  check_compatible(chain, g);
  check_window(window_length, cap);
  JointDist out{window_length, g.n_groups(), g.n_groups(), false, {}};
  ForwardWorkspace workspace;
  forward_window(chain, g.labels(), g.n_groups(), g.labels(), g.n_groups(), window_length, out.probabilities, workspace);
  return out;
}

JointDist project_joint_keyed(const FirstOrderChain& chain, const PartitionMap& g,
                              std::size_t order, std::size_t cap) {
  check_compatible(chain, g);
  if (order == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
  check_window(order + 1, cap);
  const std::size_t n = chain.n_states();
  std::vector<std::size_t> self(n);
  std::iota(self.begin(), self.end(), std::size_t{0});
  JointDist out{order + 1, n, g.n_groups(), true, {}};
  ForwardWorkspace workspace;
  forward_window(chain, self, n, g.labels(), g.n_groups(), order + 1, out.probabilities, workspace);
  return out;
}

}  // namespace markagg
