#include "markagg/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "markagg/error.hpp"

namespace markagg {
namespace {

using nlohmann::json;

json nest(std::span<const double> flat, std::size_t base, std::size_t depth) {
  if (depth == 1) return json(std::vector<double>(flat.begin(), flat.end()));
  json out = json::array();
  const std::size_t chunk = flat.size() / base;
  for (std::size_t i = 0; i < base; ++i) out.push_back(nest(flat.subspan(i * chunk, chunk), base, depth - 1));
  return out;
}

void flatten(const json& j, std::vector<double>& out) {
  if (j.is_array()) {
    for (const auto& e : j) flatten(e, out);
  } else if (j.is_number()) {
    out.push_back(j.get<double>());
  } else {
    throw Error(ErrorKind::ParseError, "expected numbers in nested arrays");
  }
}

std::size_t depth_of(const json& j) {
  std::size_t d = 0;
  const json* cur = &j;
  while (cur->is_array() && !cur->empty()) {
    ++d;
    cur = &(*cur)[0];
  }
  return d;
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

void normalize_rows(Matrix& m, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (double v : m.row(r)) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::ParseError, std::string(what) + ": negative or non-finite entry");
      }
      s += v;
    }
    const double dev = std::fabs(s - 1.0);
    if (dev > kLoadRowSumHard) {
      throw Error(ErrorKind::ParseError, std::string(what) + ": row " + std::to_string(r) +
                                             " sums to " + std::to_string(s));
    }
    if (dev > kLoadRowSumQuiet) {
      warn(std::string(what) + ": row " + std::to_string(r) + " sums to " + std::to_string(s) +
           "; renormalized");
    }
    // Leave rows that are already stochastic to rounding alone, so files
    // round-trip bit for bit.
    if (dev > 1e-12) {
      for (auto& v : m.row(r)) v /= s;
    }
  }
}

}  // namespace

json to_json(const FirstOrderChain& chain, bool include_stationary) {
  json j;
  j["order"] = 1;
  j["n_states"] = chain.n_states();
  j["transitions"] = nest(chain.transitions().data(), chain.n_states(), 2);
  if (include_stationary) j["stationary"] = chain.stationary();
  return j;
}

json to_json(const HigherOrderChain& chain, bool include_context_dist) {
  json j;
  j["order"] = chain.order();
  j["n_states"] = chain.n_states();
  j["transitions"] = nest(chain.transitions().data(), chain.n_states(), chain.order() + 1);
  if (include_context_dist) {
    j["stationary"] = nest(chain.context_dist(), chain.n_states(), chain.order());
  }
  return j;
}

json to_json(const PartitionMap& g) {
  std::vector<std::size_t> labels(g.labels());
  for (auto& l : labels) ++l;
  return {{"n_states", g.n_states()}, {"n_groups", g.n_groups()}, {"labels", labels}};
}

json to_json(const CostReport& r) {
  return {{"order", r.order},
          {"pred_cost", r.pred_cost},
          {"lump_cost", r.lump_cost},
          {"kldr_lower", r.kldr_lower},
          {"kldr_upper", r.kldr_upper},
          {"map_error", r.map_error},
          {"fano_slack", r.fano_slack},
          {"fano_bound_satisfied", r.fano_bound_satisfied}};
}

json to_json(const SearchTrace& t) {
  std::vector<std::size_t> labels(t.final_labels);
  for (auto& l : labels) ++l;
  return {{"restart", t.restart},
          {"sweep_costs", t.sweep_costs},
          {"moves", t.moves},
          {"converged", t.converged},
          {"final_labels", labels}};
}

json to_json(const RateMatrix& rates) {
  return {{"rates", nest(rates.rates().data(), rates.n_states(), 2)}};
}

HigherOrderChain higher_order_chain_from_json(const json& j) {
  const auto order = required<std::size_t>(j, "order");
  const auto m = required<std::size_t>(j, "n_states");
  if (order == 0 || m == 0) throw Error(ErrorKind::ParseError, "order and n_states must be positive");
  if (!j.contains("transitions")) throw Error(ErrorKind::ParseError, "missing field 'transitions'");
  const json& t = j["transitions"];
  const std::size_t depth = depth_of(t);
  if (depth != order + 1 && depth != 2) {
    throw Error(ErrorKind::ParseError, "transitions nesting depth " + std::to_string(depth) +
                                           " does not match order " + std::to_string(order));
  }
  std::vector<double> flat;
  flatten(t, flat);
  const std::size_t contexts = checked_power(m, order);
  if (flat.size() != contexts * m) {
    throw Error(ErrorKind::DimensionMismatch, "transitions hold " + std::to_string(flat.size()) +
                                                  " entries, expected " +
                                                  std::to_string(contexts * m));
  }
  Matrix tensor(contexts, m);
  std::copy(flat.begin(), flat.end(), tensor.data().begin());
  normalize_rows(tensor, "transitions");

  if (j.contains("stationary") && !j["stationary"].is_null()) {
    std::vector<double> dist;
    flatten(j["stationary"], dist);
    if (dist.size() != contexts) {
      throw Error(ErrorKind::DimensionMismatch, "stationary has the wrong length");
    }
    double s = 0.0;
    for (double v : dist) s += v;
    if (std::fabs(s - 1.0) > kLoadRowSumHard) {
      throw Error(ErrorKind::ParseError, "stationary does not sum to 1");
    }
    for (auto& v : dist) v /= s;
    try {
      return HigherOrderChain(order, m, std::move(tensor), std::move(dist));
    } catch (const Error& e) {
      warn(std::string("ignoring supplied stationary distribution: ") + e.what());
      std::vector<double> flat_again;
      flatten(t, flat_again);
      Matrix retry(contexts, m);
      std::copy(flat_again.begin(), flat_again.end(), retry.data().begin());
      normalize_rows(retry, "transitions");
      return HigherOrderChain(order, m, std::move(retry));
    }
  }
  return HigherOrderChain(order, m, std::move(tensor));
}

FirstOrderChain first_order_chain_from_json(const json& j) {
  const HigherOrderChain chain = higher_order_chain_from_json(j);
  if (chain.order() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "expected a first-order chain, got order " +
                                                  std::to_string(chain.order()));
  }
  if (j.contains("stationary") && !j["stationary"].is_null()) {
    return FirstOrderChain(chain.transitions(), chain.context_dist());
  }
  return FirstOrderChain(chain.transitions());
}

PartitionMap partition_from_json(const json& j) {
  const auto n = required<std::size_t>(j, "n_states");
  const auto m = required<std::size_t>(j, "n_groups");
  auto labels = required<std::vector<std::size_t>>(j, "labels");
  if (labels.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "labels length differs from n_states");
  }
  for (auto& l : labels) {
    if (l == 0 || l > m) throw Error(ErrorKind::ParseError, "labels must be in 1..n_groups");
    --l;
  }
  try {
    return PartitionMap(std::move(labels), m);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

MaintenanceRates maintenance_rates_from_json(const json& j) {
  MaintenanceRates r;
  auto take = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = j.at(key).get<double>();
  };
  take("lambda_0", r.lambda_0);
  take("lambda_1", r.lambda_1);
  take("lambda_m", r.lambda_m);
  take("mu_0", r.mu_0);
  take("mu_1", r.mu_1);
  take("mu_m", r.mu_m);
  return r;
}

RateMatrix rates_from_json(const json& j) {
  if (j.contains("model")) {
    if (j["model"] != "maintenance") {
      throw Error(ErrorKind::ParseError, "unknown rate model " + j["model"].dump());
    }
    return gen_maintenance(required<std::size_t>(j, "k"), maintenance_rates_from_json(j)).rates;
  }
  if (!j.contains("rates")) throw Error(ErrorKind::ParseError, "missing field 'rates'");
  std::vector<double> flat;
  flatten(j["rates"], flat);
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
  if (n * n != flat.size() || n == 0) throw Error(ErrorKind::DimensionMismatch, "rates must be square");
  Matrix q(n, n);
  std::copy(flat.begin(), flat.end(), q.data().begin());
  return RateMatrix::from_off_diagonal(std::move(q));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out << content;
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

std::string cost_report_csv_header() {
  return "order,pred_cost,lump_cost,kldr_lower,kldr_upper,map_error,fano_slack,fano_bound_satisfied";
}

std::string cost_report_csv_row(const CostReport& r) {
  std::ostringstream ss;
  ss.precision(17);
  ss << r.order << ',' << r.pred_cost << ',' << r.lump_cost << ',' << r.kldr_lower << ','
     << r.kldr_upper << ',' << r.map_error << ',' << r.fano_slack << ','
     << (r.fano_bound_satisfied ? "true" : "false");
  return ss.str();
}

}  // namespace markagg
