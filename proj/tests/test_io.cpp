#include <doctest.h>

#include <filesystem>

#include "markagg/error.hpp"
#include "markagg/io.hpp"
#include "test_util.hpp"

using namespace markagg;
using nlohmann::json;

TEST_CASE("first-order chain round trip is exact") {
  std::mt19937_64 rng(77);
  const FirstOrderChain chain(to_matrix(oracle::random_stochastic(6, rng)));
  const json j = to_json(chain);
  const FirstOrderChain back = first_order_chain_from_json(json::parse(j.dump()));
  CHECK(back.transitions() == chain.transitions());
  CHECK(back.stationary() == chain.stationary());
}

TEST_CASE("higher-order chains nest by order") {
  Matrix t(4, 2);
  for (std::size_t c = 0; c < 4; ++c) {
    t(c, 0) = 0.1 + 0.2 * static_cast<double>(c);
    t(c, 1) = 1.0 - t(c, 0);
  }
  const HigherOrderChain chain(2, 2, t);
  const json j = to_json(chain);
  CHECK(j["transitions"][1][0][1].get<double>() == doctest::Approx(t(2, 1)));
  const HigherOrderChain back = higher_order_chain_from_json(j);
  CHECK(back.transitions() == chain.transitions());
  // Flat M^k x M layout is accepted too.
  json flat = j;
  flat["transitions"] = json::array();
  for (std::size_t c = 0; c < 4; ++c) flat["transitions"].push_back({t(c, 0), t(c, 1)});
  flat.erase("stationary");
  CHECK(higher_order_chain_from_json(flat).transitions() == t);
  CHECK_THROWS_AS(first_order_chain_from_json(j), Error);
}

TEST_CASE("row-sum policy on load") {
  QuietWarnings quiet;
  json j = {{"order", 1}, {"n_states", 2}, {"transitions", {{0.5, 0.5000001}, {0.3, 0.7}}}};
  CHECK(first_order_chain_from_json(j)(0, 0) == doctest::Approx(0.5 / 1.0000001));
  j["transitions"] = {{0.5, 0.5004}, {0.3, 0.7}};
  CHECK_NOTHROW(first_order_chain_from_json(j));
  j["transitions"] = {{0.5, 0.6}, {0.3, 0.7}};
  CHECK_THROWS_AS(first_order_chain_from_json(j), Error);
  j["transitions"] = {{1.5, -0.5}, {0.3, 0.7}};
  CHECK_THROWS_AS(first_order_chain_from_json(j), Error);
  j["transitions"] = {{0.5, 0.5}, {0.3, 0.7}, {1, 0}};
  CHECK_THROWS_AS(first_order_chain_from_json(j), Error);
  CHECK_THROWS_AS(first_order_chain_from_json(json{{"order", 1}}), Error);
}

TEST_CASE("partition files are one-based") {
  const PartitionMap g({0, 2, 1, 2}, 3);
  const json j = to_json(g);
  CHECK(j["labels"] == json({1, 3, 2, 3}));
  CHECK(partition_from_json(j) == g);
  json bad = j;
  bad["labels"] = {0, 1, 2, 3};
  CHECK_THROWS_AS(partition_from_json(bad), Error);
  bad["labels"] = {1, 1, 1, 1};  // group 2 and 3 empty
  CHECK_THROWS_AS(partition_from_json(bad), Error);
  bad["labels"] = {1, 2, 3};
  CHECK_THROWS_AS(partition_from_json(bad), Error);
}

TEST_CASE("reports, traces and rates") {
  CostReport r;
  r.order = 2;
  r.pred_cost = 0.25;
  r.fano_bound_satisfied = true;
  const json j = to_json(r);
  CHECK(j["order"] == 2);
  CHECK(j["pred_cost"].get<double>() == 0.25);
  CHECK(cost_report_csv_row(r).rfind("2,0.25,", 0) == 0);

  SearchTrace t;
  t.final_labels = {0, 1};
  t.sweep_costs = {1.0, 0.5};
  CHECK(to_json(t)["final_labels"] == json({1, 2}));

  const RateMatrix q = rates_from_json(json{{"rates", {{0, 1}, {2, 0}}}});
  CHECK(q(1, 1) == -2.0);
  const RateMatrix mm = rates_from_json(json{{"model", "maintenance"}, {"k", 3}, {"lambda_m", 0.1}});
  CHECK(mm.n_states() == 10);
  CHECK(mm(0, 6) == 0.1);
}

TEST_CASE("file helpers") {
  const auto path = std::filesystem::temp_directory_path() / "markagg_io_test.json";
  write_text_file(path, R"({"a": [1, 2]})");
  CHECK(read_json_file(path)["a"][1] == 2);
  write_text_file(path, "{broken");
  CHECK_THROWS_AS(read_json_file(path), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_text_file(path), Error);
}
