#include "markagg/costs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "markagg/error.hpp"
#include "markagg/info.hpp"
#include "markagg/simd/kernels.hpp"

namespace markagg {
namespace {

double floor_at_zero(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value >= kNegativeFloor) return 0.0;
  throw Error(ErrorKind::InequalityViolation,
              std::string(what) + " evaluated to " + std::to_string(value));
}

void check_order(std::size_t order) {
  if (order == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
}

// H(Y) from an unkeyed joint: marginal of the last coordinate.
double last_marginal_entropy(std::span<const double> joint, std::size_t m,
                             std::vector<double>& scratch) {
  scratch.assign(m, 0.0);
  for (std::size_t base = 0; base < joint.size(); base += m) {
    simd::axpy(1.0, joint.subspan(base, m), scratch);
  }
  return entropy(scratch);
}

// H(Y_{k+1} | Y_2^k, X_1)
double keyed_conditional(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                         std::size_t cap) {
  const JointDist keyed = project_joint_keyed(chain, g, order, cap);
  return conditional_entropy_last(keyed.probabilities, g.n_groups());
}

// H(Y_{k+1} | Y_1^k)
double plain_conditional(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                         std::size_t cap) {
  const JointDist joint = project_joint(chain, g, order + 1, cap);
  return conditional_entropy_last(joint.probabilities, g.n_groups());
}

}  // namespace

std::string_view to_string(CostKind kind) noexcept {
  return kind == CostKind::pred ? "pred" : "lump";
}

CostKind parse_cost_kind(std::string_view text) {
  if (text == "pred") return CostKind::pred;
  if (text == "lump") return CostKind::lump;
  throw Error(ErrorKind::InvalidArgument, "unknown cost kind '" + std::string(text) + "'");
}

double lump_cost(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                 std::size_t cap) {
  check_order(order);
  const double value =
      plain_conditional(chain, g, order, cap) - keyed_conditional(chain, g, order, cap);
  return floor_at_zero(value, "lump cost");
}

double projected_mutual_information(const FirstOrderChain& chain, const PartitionMap& g,
                                    std::size_t order, std::size_t cap) {
  check_order(order);
  const JointDist joint = project_joint(chain, g, order + 1, cap);
  std::vector<double> scratch;
  const double h_y = last_marginal_entropy(joint.probabilities, g.n_groups(), scratch);
  return h_y - conditional_entropy_last(joint.probabilities, g.n_groups());
}

double pred_cost(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                 std::size_t cap) {
  const double value = redundancy_rate(chain) - projected_mutual_information(chain, g, order, cap);
  return floor_at_zero(value, "pred cost");
}

KldrBracket kldr_bracket(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                         std::size_t tighten_to, std::size_t cap) {
  check_order(order);
  const std::size_t k_prime = std::max(order, tighten_to);
  const double h_k = plain_conditional(chain, g, order, cap);
  const double lo = k_prime > order ? h_k - plain_conditional(chain, g, k_prime, cap) : 0.0;
  const double hi = h_k - keyed_conditional(chain, g, k_prime, cap);
  return {floor_at_zero(lo, "divergence-rate lower bound"),
          floor_at_zero(hi, "divergence-rate upper bound")};
}

MapPredictor map_predictor(const HigherOrderChain& q) {
  const auto& p = q.context_dist();
  MapPredictor out;
  out.table.resize(q.n_contexts());
  for (std::size_t c = 0; c < q.n_contexts(); ++c) {
    const auto row = q.row(c);
    // max_element returns the first maximum, i.e. the lowest index on ties.
    const auto best = std::max_element(row.begin(), row.end());
    out.table[c] = static_cast<std::size_t>(std::distance(row.begin(), best));
    out.error += p[c] * (1.0 - *best);
  }
  out.error = std::clamp(out.error, 0.0, 1.0);
  return out;
}

FanoCheck fano_check(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                     std::size_t cap) {
  check_order(order);
  const Aggregation agg = optimal_aggregation(chain, g, order, cap);
  const MapPredictor predictor = map_predictor(agg.chain);
  const JointDist marginal = project_joint(chain, g, 1, cap);
  const double p_max = *std::max_element(marginal.probabilities.begin(),
                                         marginal.probabilities.end());
  FanoCheck out;
  out.prediction_error = predictor.error;
  out.mutual_information = projected_mutual_information(chain, g, order, cap);
  out.bound = -std::log2(p_max) * (1.0 - predictor.error) - binary_entropy(predictor.error);
  out.slack = out.mutual_information - out.bound;
  out.satisfied = out.slack >= -kOrderingTolerance;
  return out;
}

CostReport evaluate_costs(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                          std::size_t cap) {
  CostReport r;
  r.order = order;
  r.pred_cost = pred_cost(chain, g, order, cap);
  r.lump_cost = lump_cost(chain, g, order, cap);
  // One extra step of lookahead when the window cap allows it.
  const std::size_t tighten = order + 2 <= cap ? order + 1 : order;
  const KldrBracket bracket = kldr_bracket(chain, g, order, tighten, cap);
  r.kldr_lower = bracket.lo;
  r.kldr_upper = bracket.hi;
  const FanoCheck fano = fano_check(chain, g, order, cap);
  r.map_error = fano.prediction_error;
  r.fano_slack = fano.slack;
  r.fano_bound_satisfied = fano.satisfied;
  return r;
}

std::vector<CostReport> cost_chain_report(const FirstOrderChain& chain, const PartitionMap& g,
                                          std::size_t k_max, std::size_t cap) {
  check_order(k_max);
  if (k_max + 1 > cap) {
    throw Error(ErrorKind::WindowTooLarge, "k_max + 1 exceeds the window cap");
  }
  std::vector<CostReport> reports;
  for (std::size_t k = 1; k <= k_max; ++k) reports.push_back(evaluate_costs(chain, g, k, cap));

  // pred(1) >= ... >= pred(k_max) >= lump(1) >= ... >= lump(k_max) >= 0
  std::vector<double> ordered;
  for (const auto& r : reports) ordered.push_back(r.pred_cost);
  for (const auto& r : reports) ordered.push_back(r.lump_cost);
  ordered.push_back(0.0);
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
    if (ordered[i] < ordered[i + 1] - kOrderingTolerance) {
      throw Error(ErrorKind::InequalityViolation,
                  "cost ordering broken at position " + std::to_string(i) + ": " +
                      std::to_string(ordered[i]) + " < " + std::to_string(ordered[i + 1]));
    }
  }
  return reports;
}

CostEvaluator::CostEvaluator(const FirstOrderChain& chain, CostKind kind, std::size_t order,
                             std::size_t cap)
    : chain_(chain), kind_(kind), order_(order) {
  check_order(order);
  if (order + 1 > cap) throw Error(ErrorKind::WindowTooLarge, "order + 1 exceeds the window cap");
  redundancy_ = redundancy_rate(chain_);
  identity_.resize(chain_.n_states());
  std::iota(identity_.begin(), identity_.end(), std::size_t{0});
}

double CostEvaluator::operator()(std::span<const std::size_t> labels, std::size_t n_groups) {
  if (labels.size() != chain_.n_states()) {
    throw Error(ErrorKind::DimensionMismatch, "label vector size differs from chain size");
  }
  forward_window(chain_, labels, n_groups, labels, n_groups, order_ + 1, joint_, workspace_);
  const double conditional = conditional_entropy_last(joint_, n_groups);
  if (kind_ == CostKind::pred) {
    const double h_y = last_marginal_entropy(joint_, n_groups, marginal_);
    return floor_at_zero(redundancy_ - (h_y - conditional), "pred cost");
  }
  forward_window(chain_, identity_, chain_.n_states(), labels, n_groups, order_ + 1, joint_,
                 workspace_);
  return floor_at_zero(conditional - conditional_entropy_last(joint_, n_groups), "lump cost");
}

}  // namespace markagg
