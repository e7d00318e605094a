// markagg: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 data/configuration error, 3 numerical
// failure (reducibility, broken cost ordering, support violations).

#include <cstdio>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "markagg/bigram.hpp"
#include "markagg/chain.hpp"
#include "markagg/costs.hpp"
#include "markagg/error.hpp"
#include "markagg/experiments.hpp"
#include "markagg/io.hpp"
#include "markagg/models.hpp"
#include "markagg/search.hpp"
#include "markagg/simd/kernels.hpp"

using namespace markagg;
using nlohmann::json;

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotIrreducible:
    case ErrorKind::InequalityViolation:
    case ErrorKind::SupportViolation:
    case ErrorKind::AbsorbingState:
      return 3;
    default:
      return 2;
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string trace_csv(const SearchResult& r) {
  std::ostringstream out;
  out << "restart,step,cost\n";
  for (std::size_t s = 0; s < r.trace.sweep_costs.size(); ++s) {
    out << r.trace.restart << ',' << s << ',' << format_number(r.trace.sweep_costs[s]) << '\n';
  }
  return out.str();
}

void print_report(const CostReport& r) {
  std::printf("k=%zu  pred=%.12g  lump=%.12g  kldr in [%.12g, %.12g]  p_e=%.6g  fano_slack=%.6g%s\n",
              r.order, r.pred_cost, r.lump_cost, r.kldr_lower, r.kldr_upper, r.map_error,
              r.fano_slack, r.fano_bound_satisfied ? "" : "  (FANO VIOLATED)");
}

struct AggregateArgs {
  std::string chain, out, trace, report;
  std::string algo = "seq";
  std::string cost = "pred";
  SearchConfig config;
};

int run_aggregate(const AggregateArgs& a) {
  const FirstOrderChain chain = first_order_chain_from_json(read_json_file(a.chain));
  SearchConfig config = a.config;
  config.cost_kind = parse_cost_kind(a.cost);
  SearchResult r = [&] {
    if (a.algo == "seq") return sequential_aggregate(chain, config);
    if (a.algo == "agglo") return agglomerative_aggregate(chain, config);
    if (a.algo == "exhaustive") return exhaustive_aggregate(chain, config);
    throw Error(ErrorKind::InvalidConfig, "unknown algorithm " + a.algo);
  }();
  emit(a.out, dump(to_json(r.partition)));
  if (!a.trace.empty()) emit(a.trace, trace_csv(r));
  if (!a.report.empty()) emit(a.report, dump(to_json(r.report)));
  if (!a.out.empty() && a.out != "-") print_report(r.report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order Markov aggregation"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel set: auto, scalar, avx2, neon");

  // stationary
  auto* stat = app.add_subcommand("stationary", "Stationary distribution of a chain");
  std::string stat_chain, stat_out;
  stat->add_option("chain", stat_chain, "Chain JSON")->required();
  stat->add_option("-o,--out", stat_out, "Write JSON here instead of stdout");

  // cost-eval
  auto* ce = app.add_subcommand("cost-eval", "Evaluate aggregation costs for a partition");
  std::string ce_chain, ce_part, ce_out;
  std::size_t ce_order = 1;
  std::size_t ce_cap = kDefaultWindowCap;
  bool ce_chain_all = false;
  ce->add_option("--chain", ce_chain, "Chain JSON")->required();
  ce->add_option("--partition", ce_part, "Partition JSON")->required();
  ce->add_option("-k,--order", ce_order, "Order k")->check(CLI::PositiveNumber);
  ce->add_flag("--all-orders", ce_chain_all, "Report k = 1..order and check their ordering");
  ce->add_option("--window-cap", ce_cap, "Largest window length");
  ce->add_option("-o,--out", ce_out, "Write JSON report here");

  // aggregate
  auto* ag = app.add_subcommand("aggregate", "Search for a partition");
  AggregateArgs ag_args;
  ag->add_option("--chain", ag_args.chain, "Chain JSON")->required();
  ag->add_option("--algo", ag_args.algo, "seq, agglo or exhaustive")
      ->check(CLI::IsMember({"seq", "agglo", "exhaustive"}));
  ag->add_option("--cost", ag_args.cost, "pred or lump")->check(CLI::IsMember({"pred", "lump"}));
  ag->add_option("-k,--order", ag_args.config.order, "Order k");
  ag->add_option("-m,--groups", ag_args.config.n_groups, "Number of groups M")->required();
  ag->add_option("--restarts", ag_args.config.restarts, "Random restarts (seq)");
  ag->add_option("--sweeps", ag_args.config.max_sweeps, "Sweep limit per restart (seq)");
  ag->add_option("--seed", ag_args.config.seed, "Master seed");
  ag->add_option("--threads", ag_args.config.threads, "Worker threads");
  ag->add_option("--window-cap", ag_args.config.window_cap, "Largest window length");
  ag->add_flag("!--allow-empty", ag_args.config.forbid_empty_groups,
               "Let moves empty a group (seq)");
  ag->add_option("-o,--out", ag_args.out, "Partition JSON output (default stdout)");
  ag->add_option("--trace", ag_args.trace, "CSV trace of the winning restart");
  ag->add_option("--report", ag_args.report, "JSON cost report");

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run one of the studies");
  ex->require_subcommand(1);

  auto* qp = ex->add_subcommand("quasi-periodic", "Cluster error probabilities vs eps");
  QuasiPeriodicOptions qp_opt;
  std::string qp_out;
  qp->add_option("--trials", qp_opt.trials, "Random matrices per eps")->check(CLI::PositiveNumber);
  qp->add_option("--eps", qp_opt.eps_grid, "Perturbation values");
  qp->add_option("--orders", qp_opt.orders, "Orders k");
  qp->add_option("--block-size", qp_opt.block_size, "States per block");
  qp->add_option("--restarts", qp_opt.restarts, "Restarts per search");
  qp->add_option("--seed", qp_opt.seed, "Master seed");
  qp->add_option("--threads", qp_opt.threads, "Worker threads");
  qp->add_option("-o,--out", qp_out, "CSV output (default stdout)");

  auto* bg = ex->add_subcommand("bigram", "Aggregate a character bi-gram model");
  BigramOptions bg_opt;
  std::string bg_corpus, bg_out;
  bool bg_keep_lines = false;
  bg->add_option("--corpus", bg_corpus, "UTF-8 text file")->required();
  bg->add_option("-m,--groups", bg_opt.n_groups, "Number of groups");
  bg->add_option("--orders", bg_opt.orders, "Orders k");
  bg->add_option("--restarts", bg_opt.restarts, "Restarts per order");
  bg->add_option("--seed", bg_opt.seed, "Master seed");
  bg->add_option("--threads", bg_opt.threads, "Worker threads");
  bg->add_option("--smoothing", bg_opt.smoothing, "Additive smoothing");
  bg->add_flag("--keep-linebreaks", bg_keep_lines, "Do not join lines");
  std::string bg_headings(kDefaultHeadingPattern);
  bg->add_option("--strip-headings", bg_headings, "Regex for heading lines to drop (empty keeps all)");
  bg->add_option("-o,--out", bg_out, "CSV output");

  auto* mt = ex->add_subcommand("maintenance", "Recover the maintenance-model partition");
  MaintenanceOptions mt_opt;
  std::string mt_out;
  mt->add_option("--k-min", mt_opt.k_min, "Smallest k");
  mt->add_option("--k-max", mt_opt.k_max, "Largest k");
  mt->add_option("--lambda-0", mt_opt.rates.lambda_0, "Spontaneous failure rate");
  mt->add_option("--lambda-1", mt_opt.rates.lambda_1, "Deterioration rate");
  mt->add_option("--lambda-m", mt_opt.rates.lambda_m, "Maintenance rate");
  mt->add_option("--mu-0", mt_opt.rates.mu_0, "Repair rate after spontaneous failure");
  mt->add_option("--mu-1", mt_opt.rates.mu_1, "Repair rate after deterioration failure");
  mt->add_option("--mu-m", mt_opt.rates.mu_m, "End-of-maintenance rate");
  mt->add_option("--restarts", mt_opt.restarts, "Independent single-start runs");
  mt->add_option("--seed", mt_opt.seed, "Master seed");
  mt->add_option("--threads", mt_opt.threads, "Worker threads");
  mt->add_option("-o,--out", mt_out, "CSV output");

  // bigram-train
  auto* bt = app.add_subcommand("bigram-train", "Train a bi-gram chain from text");
  std::string bt_corpus, bt_out;
  double bt_smoothing = kDefaultSmoothing;
  bool bt_keep_lines = false;
  bt->add_option("--corpus", bt_corpus, "UTF-8 text file")->required();
  bt->add_option("--smoothing", bt_smoothing, "Additive smoothing");
  bt->add_flag("--keep-linebreaks", bt_keep_lines, "Do not join lines");
  std::string bt_headings(kDefaultHeadingPattern);
  bt->add_option("--strip-headings", bt_headings, "Regex for heading lines to drop (empty keeps all)");
  bt->add_option("-o,--out", bt_out, "Chain JSON output (adds an \"alphabet\" field)");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a model chain (and its reference partition)");
  std::string gen_model, gen_out, gen_part;
  std::uint64_t gen_seed = 1;
  double gen_eps = 0.0, gen_p = 0.5;
  std::size_t gen_block = 10, gen_k = 4, gen_states = 8;
  std::vector<std::size_t> gen_sizes = {3, 3};
  MaintenanceRates gen_rates;
  gen->add_option("model", gen_model, "quasi-periodic, toy, block, maintenance or random")
      ->required()
      ->check(CLI::IsMember({"quasi-periodic", "toy", "block", "maintenance", "random"}));
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--eps", gen_eps, "Perturbation weight of a random irreducible E");
  gen->add_option("--p", gen_p, "Toy model parameter");
  gen->add_option("--block-size", gen_block, "Quasi-periodic block size");
  gen->add_option("--sizes", gen_sizes, "Block sizes (block model, cyclic A)");
  gen->add_option("--k", gen_k, "Maintenance deterioration levels");
  gen->add_option("--states", gen_states, "Random chain size");
  gen->add_option("--lambda-m", gen_rates.lambda_m, "Maintenance rate");
  gen->add_option("--lambda-1", gen_rates.lambda_1, "Deterioration rate");
  gen->add_option("--lambda-0", gen_rates.lambda_0, "Spontaneous failure rate");
  gen->add_option("-o,--out", gen_out, "Chain JSON output (default stdout)");
  gen->add_option("--partition-out", gen_part, "Reference partition JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (simd != "auto") {
      const simd::Isa isa = simd == "scalar" ? simd::Isa::scalar
                            : simd == "avx2" ? simd::Isa::avx2
                            : simd == "neon" ? simd::Isa::neon
                                             : throw Error(ErrorKind::InvalidConfig,
                                                           "unknown --simd value " + simd);
      if (!simd::set_isa(isa)) {
        throw Error(ErrorKind::InvalidConfig, simd + " kernels are not available here");
      }
    }

    if (*stat) {
      const auto chain = higher_order_chain_from_json(read_json_file(stat_chain));
      emit(stat_out, dump(json{{"stationary", chain.context_dist()}}));
    } else if (*ce) {
      const FirstOrderChain chain = first_order_chain_from_json(read_json_file(ce_chain));
      const PartitionMap g = partition_from_json(read_json_file(ce_part));
      if (g.n_states() != chain.n_states()) {
        throw Error(ErrorKind::DimensionMismatch, "partition and chain sizes differ");
      }
      json out = json::array();
      if (ce_chain_all) {
        for (const auto& r : cost_chain_report(chain, g, ce_order, ce_cap)) {
          print_report(r);
          out.push_back(to_json(r));
        }
      } else {
        const CostReport r = evaluate_costs(chain, g, ce_order, ce_cap);
        print_report(r);
        out.push_back(to_json(r));
      }
      if (!ce_out.empty()) write_text_file(ce_out, dump(out));
    } else if (*ag) {
      return run_aggregate(ag_args);
    } else if (*qp) {
      emit(qp_out, run_quasi_periodic(qp_opt).to_csv());
    } else if (*bg) {
      bg_opt.text.strip_linebreaks = !bg_keep_lines;
      bg_opt.text.heading_pattern =
          bg_headings.empty() ? std::nullopt : std::optional<std::string>(bg_headings);
      const BigramExperiment r = run_bigram(read_text_file(bg_corpus), bg_opt);
      std::printf("alphabet size %zu, %zu characters\n", r.model.alphabet.size(),
                  r.model.n_characters);
      for (const auto& o : r.per_order) {
        std::printf("\nk=%zu  cost=%.12g", o.order, o.search.cost);
        if (o.has_reference) std::printf("  reference=%.12g", o.reference_cost);
        std::printf("\n%s", render_partition(o.search.partition, r.model.alphabet).c_str());
      }
      if (!bg_out.empty()) write_text_file(bg_out, r.table.to_csv());
    } else if (*mt) {
      emit(mt_out, run_maintenance(mt_opt).to_csv());
    } else if (*bt) {
      TextOptions text;
      text.strip_linebreaks = !bt_keep_lines;
      text.heading_pattern =
          bt_headings.empty() ? std::nullopt : std::optional<std::string>(bt_headings);
      const auto chars = preprocess_text(read_text_file(bt_corpus), text);
      if (chars.size() < 2) throw Error(ErrorKind::EmptyText, "corpus has fewer than two characters");
      const BigramModel m = bigram_train(chars, bt_smoothing);
      json j = to_json(m.chain, false);
      j["alphabet"] = encode_utf8(m.alphabet);
      emit(bt_out, dump(j));
    } else if (*gen) {
      auto with_eps = [&](const FirstOrderChain& c) {
        return gen_eps > 0.0 ? perturb(c, gen_eps, derive_seed(gen_seed, 99)) : c;
      };
      std::optional<PartitionMap> reference;
      std::optional<FirstOrderChain> chain;
      if (gen_model == "quasi-periodic") {
        auto lc = gen_quasi_periodic(gen_block, gen_seed);
        chain = with_eps(lc.chain);
        reference = lc.partition;
      } else if (gen_model == "toy") {
        chain = gen_toy(gen_p, gen_eps, gen_seed);
        reference = toy_predictive_partition();
      } else if (gen_model == "block") {
        const std::size_t b = gen_sizes.size();
        Matrix a(b, b);
        for (std::size_t i = 0; i < b; ++i) a(i, (i + 1) % b) = 1.0;
        auto lc = gen_block_stochastic(gen_sizes, a, gen_seed);
        chain = with_eps(lc.chain);
        reference = lc.partition;
      } else if (gen_model == "maintenance") {
        const auto mm = gen_maintenance(gen_k, gen_rates);
        chain = embed_jump_chain(mm.rates);
        reference = mm.reference;
      } else {
        chain = FirstOrderChain(random_stochastic(gen_states, gen_states, gen_seed));
      }
      emit(gen_out, dump(to_json(*chain, false)));
      if (!gen_part.empty()) {
        if (!reference) throw Error(ErrorKind::InvalidArgument, "model has no reference partition");
        write_text_file(gen_part, dump(to_json(*reference)));
      }
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "markagg: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "markagg: " << e.what() << "\n";
    return 2;
  }
}
