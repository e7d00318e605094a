#include "markagg/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>

#include "markagg/error.hpp"
#include "markagg/parallel.hpp"

namespace markagg {

bool cluster_error(const PartitionMap& found, const PartitionMap& truth) {
  if (found.n_states() != truth.n_states()) {
    throw Error(ErrorKind::DimensionMismatch, "cluster_error: partitions of different alphabets");
  }
  if (found.n_groups() != truth.n_groups()) return true;
  return !found.same_partition(truth);
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

double ExperimentResult::value(const std::string& param, std::size_t order,
                               const std::string& metric) const {
  for (const auto& r : rows) {
    if (r.param == param && r.order == order && r.metric == metric) return r.value;
  }
  throw Error(ErrorKind::InvalidArgument,
              "no row " + param + "/" + std::to_string(order) + "/" + metric);
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream out;
  out << kExperimentCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.param << ',' << r.order << ',' << r.metric << ','
        << format_number(r.value) << ',' << r.trials << ',' << r.seed << '\n';
  }
  return out.str();
}

namespace {

std::string format_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", eps);
  return buf;
}

}  // namespace

ExperimentResult run_quasi_periodic(const QuasiPeriodicOptions& o) {
  if (o.trials == 0 || o.eps_grid.empty() || o.orders.empty()) {
    throw Error(ErrorKind::InvalidConfig, "quasi-periodic: need trials, eps values and orders");
  }
  for (double eps : o.eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw Error(ErrorKind::InvalidConfig, "quasi-periodic: eps must lie in (0, 1]");
    }
  }
  const std::size_t n = 2 * o.block_size;
  const std::size_t cells = o.eps_grid.size() * o.orders.size();
  // errors[t * cells + c], costs likewise
  std::vector<unsigned char> errors(o.trials * cells, 0);
  std::vector<double> costs(o.trials * cells, 0.0);

  parallel_for(o.trials, o.threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(o.seed, t);
    const LabeledChain base = gen_quasi_periodic(o.block_size, derive_seed(trial_seed, 0));
    const Matrix e = random_stochastic(n, n, derive_seed(trial_seed, 1));
    for (std::size_t ie = 0; ie < o.eps_grid.size(); ++ie) {
      const FirstOrderChain chain(perturb(base.chain.transitions(), o.eps_grid[ie], e));
      for (std::size_t io = 0; io < o.orders.size(); ++io) {
        SearchConfig config;
        config.cost_kind = CostKind::pred;
        config.order = o.orders[io];
        config.n_groups = 2;
        config.restarts = o.restarts;
        config.max_sweeps = o.max_sweeps;
        config.seed = derive_seed(trial_seed, 2);
        const SearchResult r = sequential_aggregate(chain, config);
        const std::size_t c = ie * o.orders.size() + io;
        errors[t * cells + c] = cluster_error(r.partition, base.partition) ? 1 : 0;
        costs[t * cells + c] = r.cost;
      }
    }
  });

  ExperimentResult result{"quasi_periodic", o.seed, {}};
  for (std::size_t ie = 0; ie < o.eps_grid.size(); ++ie) {
    for (std::size_t io = 0; io < o.orders.size(); ++io) {
      const std::size_t c = ie * o.orders.size() + io;
      std::size_t n_err = 0;
      double cost_sum = 0.0;
      for (std::size_t t = 0; t < o.trials; ++t) {
        n_err += errors[t * cells + c];
        cost_sum += costs[t * cells + c];
      }
      const auto trials = static_cast<double>(o.trials);
      const std::string param = format_eps(o.eps_grid[ie]);
      result.rows.push_back({result.experiment, param, o.orders[io], "cep",
                             static_cast<double>(n_err) / trials, o.trials, o.seed});
      result.rows.push_back({result.experiment, param, o.orders[io], "mean_cost",
                             cost_sum / trials, o.trials, o.seed});
    }
  }
  return result;
}

ExperimentResult run_maintenance(const MaintenanceOptions& o) {
  if (o.k_min < 1 || o.k_max < o.k_min || o.restarts == 0 || o.orders.empty()) {
    throw Error(ErrorKind::InvalidConfig, "maintenance: empty k range, orders or restarts");
  }
  ExperimentResult result{"maintenance", o.seed, {}};
  for (std::size_t k = o.k_min; k <= o.k_max; ++k) {
    const MaintenanceModel model = gen_maintenance(k, o.rates);
    const FirstOrderChain chain = embed_jump_chain(model.rates);
    for (std::size_t order : o.orders) {
      SearchConfig config;
      config.cost_kind = CostKind::pred;
      config.order = order;
      config.n_groups = model.reference.n_groups();
      config.restarts = 1;
      config.max_sweeps = o.max_sweeps;

      std::vector<double> cost(o.restarts);
      std::vector<unsigned char> hit(o.restarts);
      parallel_for(o.restarts, o.threads, [&](std::size_t r) {
        SearchConfig c = config;
        c.seed = derive_seed(derive_seed(o.seed, k * 16 + order), r);
        const SearchResult sr = sequential_aggregate(chain, c);
        cost[r] = sr.cost;
        hit[r] = cluster_error(sr.partition, model.reference) ? 0 : 1;
      });
      std::size_t best = 0;
      for (std::size_t r = 1; r < o.restarts; ++r) {
        if (cost[r] < cost[best]) best = r;
      }
      const auto hits = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
      const double reference_cost = pred_cost(chain, model.reference, order);
      const std::string param = std::to_string(k);
      auto add = [&](const char* metric, double v) {
        result.rows.push_back({result.experiment, param, order, metric, v, o.restarts, o.seed});
      };
      add("recovery_rate", hits / static_cast<double>(o.restarts));
      add("best_recovered", hit[best]);
      add("best_cost", cost[best]);
      add("reference_cost", reference_cost);
    }
  }
  return result;
}

PartitionMap bigram_reference_partition(std::u32string_view alphabet) {
  static const std::u32string groups[] = {
      U" !'),.03:;?]",
      U"bcdfgklmnprstvwxy",
      U"aeioué",
      U"\"$(-12456789ABCDEFGHIJKLMNOPQRSTUVWYZ[hjq",
  };
  std::vector<std::size_t> labels(alphabet.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const char32_t c = alphabet[i];
    std::size_t g = 3;
    bool listed = false;
    for (std::size_t j = 0; j < 4 && !listed; ++j) {
      if (groups[j].find(c) != std::u32string::npos) {
        g = j;
        listed = true;
      }
    }
    if (!listed && c >= U'a' && c <= U'z') g = 1;
    labels[i] = g;
  }
  // Drop groups the alphabet does not reach.
  std::vector<std::size_t> remap(4, 4);
  std::size_t next = 0;
  for (std::size_t g = 0; g < 4; ++g) {
    if (std::find(labels.begin(), labels.end(), g) != labels.end()) remap[g] = next++;
  }
  for (auto& l : labels) l = remap[l];
  return PartitionMap(std::move(labels), next);
}

std::string render_partition(const PartitionMap& g, std::u32string_view alphabet) {
  if (g.n_states() != alphabet.size()) {
    throw Error(ErrorKind::DimensionMismatch, "render_partition: alphabet size differs");
  }
  std::string out;
  for (const auto& members : g.groups()) {
    std::u32string line;
    for (std::size_t s : members) line.push_back(alphabet[s]);
    std::sort(line.begin(), line.end());
    std::replace(line.begin(), line.end(), U' ', U'␣');
    out += encode_utf8(line);
    out += '\n';
  }
  return out;
}

BigramExperiment run_bigram(std::string_view utf8_text, const BigramOptions& options) {
  const std::u32string text = preprocess_text(utf8_text, options.text);
  if (text.size() < 2) throw Error(ErrorKind::EmptyText, "bigram: corpus has fewer than two characters");
  return run_bigram_on_model(bigram_train(text, options.smoothing), options);
}

BigramExperiment run_bigram_on_model(BigramModel model, const BigramOptions& o) {
  BigramExperiment out{std::move(model), {}, {"bigram", o.seed, {}}};
  const std::size_t n = out.model.alphabet.size();
  std::optional<PartitionMap> reference;
  if (o.n_groups == 4) {
    PartitionMap ref = bigram_reference_partition(out.model.alphabet);
    if (ref.n_groups() == 4) reference = std::move(ref);
  }
  for (std::size_t order : o.orders) {
    SearchConfig config;
    config.cost_kind = CostKind::pred;
    config.order = order;
    config.n_groups = o.n_groups;
    config.restarts = o.restarts;
    config.max_sweeps = o.max_sweeps;
    config.seed = derive_seed(o.seed, order);
    config.threads = o.threads;
    validate(config, n);

    BigramOrderResult r{order, sequential_aggregate(out.model.chain, config), 0.0, false};
    if (reference) {
      r.reference_cost = pred_cost(out.model.chain, *reference, order);
      r.has_reference = true;
    }
    const std::string param = std::to_string(o.n_groups);
    auto add = [&](const char* metric, double v) {
      out.table.rows.push_back({"bigram", param, order, metric, v, o.restarts, o.seed});
    };
    add("best_cost", r.search.cost);
    if (r.has_reference) add("reference_cost", r.reference_cost);
    add("lump_cost", r.search.report.lump_cost);
    add("map_error", r.search.report.map_error);
    out.per_order.push_back(std::move(r));
  }
  return out;
}

SyntheticCorpus synthetic_corpus(std::size_t per_class, std::size_t length, double eps,
                                 std::uint64_t seed) {
  if (per_class == 0 || per_class > 8) {
    throw Error(ErrorKind::InvalidArgument, "synthetic_corpus: per_class must be in 1..8");
  }
  static constexpr char32_t pools[3][8] = {
      {U'a', U'e', U'i', U'o', U'u', U'y', U'A', U'E'},
      {U'b', U'c', U'd', U'f', U'g', U'h', U'k', U'l'},
      {U' ', U'.', U',', U';', U':', U'!', U'?', U'-'},
  };
  const std::size_t sizes[3] = {per_class, per_class, per_class};
  const Matrix cycle{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  const LabeledChain base = gen_block_stochastic(sizes, cycle, derive_seed(seed, 0));
  const std::size_t n = 3 * per_class;
  const FirstOrderChain chain =
      perturb(base.chain, eps, random_stochastic(n, n, derive_seed(seed, 1)));
  const std::vector<std::size_t> path = simulate(chain, length, derive_seed(seed, 2));

  SyntheticCorpus out{{}, {}, base.partition};
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) out.alphabet.push_back(pools[c][i]);
  }
  std::u32string text;
  text.reserve(path.size());
  for (std::size_t s : path) text.push_back(out.alphabet[s]);
  out.text = encode_utf8(text);
  return out;
}

}  // namespace markagg
