#pragma once

// Aggregation cost functions (bits) and the bounds relating them.
//
//   pred_cost  = I(X_2; X_1) - I(Y_{k+1}; Y_1^k)
//   lump_cost  = H(Y_{k+1} | Y_1^k) - H(Y_{k+1} | Y_2^k, X_1)
//
// For every chain and partition these satisfy
//   pred(1) >= pred(2) >= ... >= lump(1) >= lump(2) >= ... >= 0
// and lump(k) bounds the divergence rate between Y and its best order-k
// Markov approximation from above.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "markagg/chain.hpp"
#include "markagg/lifting.hpp"
#include "markagg/partition.hpp"
#include "markagg/projection.hpp"

namespace markagg {

enum class CostKind { pred, lump };

std::string_view to_string(CostKind kind) noexcept;
CostKind parse_cost_kind(std::string_view text);

// Differences of equal entropies may round below zero; anything above this
// floor is reported as 0, anything below it is an InequalityViolation.
inline constexpr double kNegativeFloor = -1e-12;
inline constexpr double kOrderingTolerance = 1e-10;

double lump_cost(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                 std::size_t cap = kDefaultWindowCap);
double pred_cost(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                 std::size_t cap = kDefaultWindowCap);

// I(Y_{k+1}; Y_1^k) of the projection.
double projected_mutual_information(const FirstOrderChain& chain, const PartitionMap& g,
                                    std::size_t order, std::size_t cap = kDefaultWindowCap);

struct KldrBracket {
  double lo = 0.0;
  double hi = 0.0;
};

// Bracket on the divergence rate between Y and its best order-k
// approximation, H(Y_{k+1} | Y_1^k) minus the entropy rate of Y. The entropy
// rate is replaced by H(Y_{k'+1} | Y_1^{k'}) for the lower end and by
// H(Y_{k'+1} | Y_2^{k'}, X_1) for the upper end; k' = max(order, tighten_to).
KldrBracket kldr_bracket(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                         std::size_t tighten_to = 0, std::size_t cap = kDefaultWindowCap);

struct MapPredictor {
  // Predicted next symbol per context (ties go to the lowest index).
  std::vector<std::size_t> table;
  double error = 0.0;
};

MapPredictor map_predictor(const HigherOrderChain& q);

struct FanoCheck {
  bool satisfied = false;
  double slack = 0.0;               // lhs - rhs
  double mutual_information = 0.0;  // I(Y_{k+1}; Y_1^k)
  double bound = 0.0;               // -log max p_Y * (1 - p_e) - h(p_e)
  double prediction_error = 0.0;
};

FanoCheck fano_check(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                     std::size_t cap = kDefaultWindowCap);

struct CostReport {
  std::size_t order = 0;
  double pred_cost = 0.0;
  double lump_cost = 0.0;
  double kldr_lower = 0.0;
  double kldr_upper = 0.0;
  double map_error = 0.0;
  double fano_slack = 0.0;
  bool fano_bound_satisfied = false;
};

CostReport evaluate_costs(const FirstOrderChain& chain, const PartitionMap& g, std::size_t order,
                          std::size_t cap = kDefaultWindowCap);

// Reports for k = 1..k_max. Throws Error(InequalityViolation) if the ordered
// chain of costs is broken by more than kOrderingTolerance.
std::vector<CostReport> cost_chain_report(const FirstOrderChain& chain, const PartitionMap& g,
                                          std::size_t k_max, std::size_t cap = kDefaultWindowCap);

// Allocation-free cost evaluation for search loops. Labels need not be
// surjective: an empty group simply carries no mass.
class CostEvaluator {
 public:
  CostEvaluator(const FirstOrderChain& chain, CostKind kind, std::size_t order,
                std::size_t cap = kDefaultWindowCap);

  double operator()(std::span<const std::size_t> labels, std::size_t n_groups);
  double operator()(const PartitionMap& g) { return (*this)(g.labels(), g.n_groups()); }

  CostKind kind() const noexcept { return kind_; }
  std::size_t order() const noexcept { return order_; }
  const FirstOrderChain& chain() const noexcept { return chain_; }

 private:
  FirstOrderChain chain_;
  CostKind kind_;
  std::size_t order_;
  double redundancy_ = 0.0;
  std::vector<std::size_t> identity_;
  std::vector<double> joint_;
  std::vector<double> marginal_;
  ForwardWorkspace workspace_;
};

}  // namespace markagg
