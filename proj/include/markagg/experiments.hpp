#pragma once

// Drivers for the quasi-periodic, bi-gram and maintenance studies, and the
// CSV table they emit.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "markagg/bigram.hpp"
#include "markagg/costs.hpp"
#include "markagg/models.hpp"
#include "markagg/partition.hpp"
#include "markagg/search.hpp"

namespace markagg {

// True when no relabeling of the groups of `found` turns it into `truth`,
// i.e. at least one state is misclassified. Partitions with a different
// number of groups always count as an error.
bool cluster_error(const PartitionMap& found, const PartitionMap& truth);

struct ExperimentRow {
  std::string experiment;
  std::string param;  // epsilon or k, already formatted
  std::size_t order = 0;
  std::string metric;
  double value = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<ExperimentRow> rows;

  // First row matching (param, order, metric); throws InvalidArgument if none.
  double value(const std::string& param, std::size_t order, const std::string& metric) const;
  std::string to_csv() const;
};

inline constexpr const char* kExperimentCsvHeader = "experiment,param,order,metric,value,trials,seed";

// Fixed-precision rendering shared by every CSV writer.
std::string format_number(double value);

struct QuasiPeriodicOptions {
  std::size_t trials = 500;
  std::vector<double> eps_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::size_t> orders = {1, 2};
  std::size_t block_size = 10;
  std::size_t restarts = 1;
  std::size_t max_sweeps = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

// Per trial: a fresh P' and E, P = (1 - eps) P' + eps E for every eps on the
// grid, one sequential search per order. Metrics per (eps, order): "cep" and
// "mean_cost".
ExperimentResult run_quasi_periodic(const QuasiPeriodicOptions& options);

struct MaintenanceOptions {
  std::size_t k_min = 3;
  std::size_t k_max = 7;
  MaintenanceRates rates;
  std::vector<std::size_t> orders = {2, 1};
  std::size_t restarts = 10;
  std::size_t max_sweeps = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

// Every restart is an independent single-start search. Metrics per (k, order):
// "recovery_rate" (fraction of restarts ending in the reference partition),
// "best_recovered" (whether the lowest-cost restart did), "best_cost" and
// "reference_cost".
ExperimentResult run_maintenance(const MaintenanceOptions& options);

struct BigramOptions {
  std::size_t n_groups = 4;
  std::vector<std::size_t> orders = {1, 2};
  std::size_t restarts = 10;
  std::size_t max_sweeps = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double smoothing = kDefaultSmoothing;
  TextOptions text;
};

struct BigramOrderResult {
  std::size_t order = 0;
  SearchResult search;
  // Cost of the reference grouping at this order; only filled when
  // n_groups == 4.
  double reference_cost = 0.0;
  bool has_reference = false;
};

struct BigramExperiment {
  BigramModel model;
  std::vector<BigramOrderResult> per_order;
  ExperimentResult table;
};

// Four-way reference grouping of an alphabet: separators, lower-case
// consonants, lower-case vowels, and capitals/digits/openers. Lower-case
// letters not listed join the consonants; any other character joins the last
// group. Empty groups are dropped.
PartitionMap bigram_reference_partition(std::u32string_view alphabet);

// One line per group, characters in alphabet order, space shown as U+2423.
std::string render_partition(const PartitionMap& g, std::u32string_view alphabet);

// Throws Error(EmptyText) when the preprocessed text has fewer than two
// characters.
BigramExperiment run_bigram(std::string_view utf8_text, const BigramOptions& options);
BigramExperiment run_bigram_on_model(BigramModel model, const BigramOptions& options);

struct SyntheticCorpus {
  std::string text;
  std::u32string alphabet;            // state order of the generating chain
  PartitionMap classes;               // ground truth over `alphabet`
};

// Text sampled from a block-stochastic chain over three character classes
// that follow each other cyclically, with a small leak eps between classes.
SyntheticCorpus synthetic_corpus(std::size_t per_class, std::size_t length, double eps,
                                 std::uint64_t seed);

}  // namespace markagg
