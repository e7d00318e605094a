#pragma once

// JSON file formats for chains, partitions, cost reports and search traces.
//
// Chain:      {"order": k, "n_states": M, "transitions": [...], "stationary": [...]}
//             transitions nest k+1 levels deep (a flat M^k x M table is also
//             accepted); "stationary" is optional.
// Partition:  {"n_states": N, "n_groups": M, "labels": [g(1), ..., g(N)]}, 1-based.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "markagg/chain.hpp"
#include "markagg/costs.hpp"
#include "markagg/models.hpp"
#include "markagg/partition.hpp"
#include "markagg/search.hpp"

namespace markagg {

// Rows off by at most this much are renormalized silently; up to the hard
// limit they are renormalized with a warning; beyond it loading fails.
inline constexpr double kLoadRowSumQuiet = 1e-6;
inline constexpr double kLoadRowSumHard = 1e-3;

nlohmann::json to_json(const FirstOrderChain& chain, bool include_stationary = true);
nlohmann::json to_json(const HigherOrderChain& chain, bool include_context_dist = true);
nlohmann::json to_json(const PartitionMap& g);
nlohmann::json to_json(const CostReport& report);
nlohmann::json to_json(const SearchTrace& trace);
nlohmann::json to_json(const RateMatrix& rates);

HigherOrderChain higher_order_chain_from_json(const nlohmann::json& j);
// Throws Error(DimensionMismatch) if the file holds a chain of order > 1.
FirstOrderChain first_order_chain_from_json(const nlohmann::json& j);
PartitionMap partition_from_json(const nlohmann::json& j);

// Accepts {"rates": [[...]]} (off-diagonal rates, diagonal ignored) or the
// named maintenance form {"model": "maintenance", "k": 4, "lambda_0": ...}.
RateMatrix rates_from_json(const nlohmann::json& j);
MaintenanceRates maintenance_rates_from_json(const nlohmann::json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
nlohmann::json read_json_file(const std::filesystem::path& path);

std::string cost_report_csv_header();
std::string cost_report_csv_row(const CostReport& report);

}  // namespace markagg
