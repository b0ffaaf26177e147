#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "recon/closed_form.hpp"
#include "recon/errors.hpp"
#include "recon/numerics.hpp"
#include "recon/runner.hpp"

using namespace recon;
namespace fs = std::filesystem;

namespace {

const char* kTable2 = R"({
  "schema_version": 1,
  "regime": "no_trader",
  "sweep": {"lambda": [0, 0.4, 10], "demand": [1e6, 5e6]}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("recon_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string with(const std::string& key_value) {
  return R"({"schema_version": 1, "regime": "nash", "sweep": {"lambda": [0], "demand": [1e6], )" + key_value +
         "}}";
}

}  // namespace

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "regime": "no_trader",
      "sweep": {"lambda": [], "demand": [1e6]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "regime": "no_trader", "sweep": {"lambda": [0]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2, "regime": "no_trader",
      "sweep": {"lambda": [0], "demand": [1e6]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "regime": "no_trader", "colour": "red",
      "sweep": {"lambda": [0], "demand": [1e6]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "regime": "heist",
      "sweep": {"lambda": [0], "demand": [1e6]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  // regime-specific axes
  CHECK_THROWS_AS(parse_config(with(R"("participation": [0.1], "tau": [1])")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"("participation": [0.1], "start_day": [1])")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(R"("demand": [1e6])")), ConfigError);
  CHECK_NOTHROW(parse_config(with(R"("participation": [0.1])")));
}

TEST_CASE("config round trip") {
  RunConfig c = parse_config(R"({
    "schema_version": 1, "name": "rt", "regime": "stackelberg", "preset": "mid-cap",
    "params": {"gamma": 2e-7}, "aum": 1e10,
    "sweep": {"lambda": [0, 0.4], "demand": [5e6], "participation": [0.1, 0.2], "tau": [1, 5]},
    "conventions": {"lambda_scaling": "raw", "proceeds": "benchmark_rate", "evaluation": "stepwise",
                    "grid_points": 1001},
    "verify": true, "threads": 3, "path_points": 51
  })");
  CHECK(c.params.gamma == 2e-7);
  CHECK(c.params.eta == preset("mid-cap").eta);
  const std::string once = config_to_json(c);
  const RunConfig back = parse_config(once);
  CHECK(config_to_json(back) == once);
  CHECK(back.conventions.lambda_scaling == LambdaScaling::Raw);
  CHECK(back.conventions.grid_points == 1001);
  CHECK(back.sweep.tau->size() == 2);
}

TEST_CASE("scenario expansion order") {
  const RunConfig c = parse_config(R"({"schema_version": 1, "regime": "nash",
    "sweep": {"lambda": [0, 1], "demand": [1e6, 5e6], "participation": [0.1, 0.2]}})");
  const auto specs = expand_scenarios(c);
  REQUIRE(specs.size() == 8);
  CHECK(specs[0].scenario.lambda == 0.0);
  CHECK(specs[1].participation == 0.2);
  CHECK(specs[2].scenario.demand == 5e6);
  CHECK(specs[4].scenario.lambda == 1.0);
  CHECK(specs[7].scenario.trader_terminal == doctest::Approx(1e6));
}

TEST_CASE("table 2 config gives six rows") {
  RunConfig c = parse_config(kTable2);
  c.output_dir = scratch("table2");
  c.path_points = 11;
  const auto summary = run(c);
  REQUIRE(summary.rows.size() == 6);
  CHECK(summary.errors == 0);
  const std::string csv = slurp(c.output_dir / "results.csv");
  CHECK(csv.find("savings_usd") != std::string::npos);
  CHECK(csv.find("tracking_error_bps") != std::string::npos);
  CHECK(fs::exists(c.output_dir / "paths" / "scenario_0005.csv"));
  CHECK(fs::exists(c.output_dir / "manifest.json"));
  // savings fall and tracking error falls as lambda grows
  for (std::size_t d = 0; d < 2; ++d) {
    const auto& lo = summary.rows[d].report;
    const auto& hi = summary.rows[4 + d].report;
    CHECK(hi.savings_usd <= lo.savings_usd);
    CHECK(hi.tracking_error_bps <= lo.tracking_error_bps);
  }
  fs::remove_all(c.output_dir);
}

TEST_CASE("unsolvable scenarios become error rows") {
  RunConfig c = parse_config(R"({"schema_version": 1, "regime": "no_trader",
    "sweep": {"lambda": [0, 1e20], "demand": [1e6]}, "conventions": {"lambda_scaling": "raw"}})");
  c.output_dir = scratch("errors");
  const auto summary = run(c);
  REQUIRE(summary.rows.size() == 2);
  CHECK(summary.rows[0].status == RowStatus::Ok);
  CHECK(summary.rows[1].status == RowStatus::SolverError);
  CHECK(summary.errors == 1);
  fs::remove_all(c.output_dir);
}

TEST_CASE("runs are deterministic across repeats and thread counts") {
  RunConfig c = parse_config(R"({"schema_version": 1, "regime": "nash", "verify": true,
    "sweep": {"lambda": [0, 0.4, 1], "demand": [1e6, 5e6], "participation": [0.1, 0.2]}})");
  c.output_dir = scratch("det");
  const char* files[] = {"results.csv", "table.csv", "table.txt", "paths/scenario_0007.csv"};
  c.threads = 1;
  run(c);
  std::vector<std::string> first;
  for (const char* f : files) first.push_back(slurp(c.output_dir / f));
  c.threads = 4;
  run(c);
  for (std::size_t i = 0; i < first.size(); ++i) {
    INFO(files[i]);
    CHECK_FALSE(first[i].empty());
    CHECK(slurp(c.output_dir / files[i]) == first[i]);
  }
  fs::remove_all(c.output_dir);
}

TEST_CASE("table csv round trip") {
  std::vector<TableRow> rows(2);
  rows[0] = {0.4, 5e6, 0.1, 1.0, 1.0, 0.0, 2.1e7, 754.123456789, 3.45, 2.0e6, 788.0};
  rows[1] = {1.0, 1e6, 0.2, 5.0, 1.0, 0.0, -1.0e6, -257.5, 0.5, 1.1e6, 1163.25};
  const auto back = parse_table_csv(table_csv(rows));
  REQUIRE(back.size() == 2);
  CHECK(table_csv(back) == table_csv(rows));
  CHECK(back[1].savings_bps == -257.5);

  const auto empty = table_csv({});
  CHECK(parse_table_csv(empty).empty());
  CHECK_FALSE(table_text(Regime::Nash, {}).empty());
  CHECK_THROWS_AS(parse_table_csv("nope\n"), ConfigError);
}

TEST_CASE("Nash table layout has a profit column per participation") {
  RunConfig c = parse_config(R"({"schema_version": 1, "regime": "nash",
    "sweep": {"lambda": [0], "demand": [5e6], "participation": [0.1, 0.2]}})");
  c.path_points = 0;
  const auto text = make_tables(Regime::Nash, evaluate_all(c)).text;
  CHECK(text.find("Profit f=0.1") != std::string::npos);
  CHECK(text.find("Profit f=0.2") != std::string::npos);
}

TEST_CASE("price path") {
  ImpactParams p;
  const auto g = numerics::uniform_grid(5.0, 101);
  const auto zero = InventoryPath::flat_zero(g);
  for (const auto& r : emit_price_path(p, zero, zero)) {
    CHECK(r.mid == p.s0);
    CHECK(r.cum_return == 0.0);
  }

  ScenarioParams s;
  s.demand = 5e6;
  s.trader_terminal = 4.5e6;
  s.horizon = 5.0;
  p.gamma = 3e-7;
  const auto one = price_path_scenario(p, s, 101);
  CHECK(one.records.front().mid == p.s0);
  ImpactParams p2 = p;
  p2.gamma = 6e-7;
  const auto two = price_path_scenario(p2, s, 101);
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(two.records[i].mid - p.s0 == doctest::Approx(2 * (one.records[i].mid - p.s0)).epsilon(1e-12));
  }
  CHECK(one.decomposition.permanent == doctest::Approx(0.027).epsilon(1e-3));

  const auto other = numerics::uniform_grid(5.0, 51);
  CHECK_THROWS_AS(emit_price_path(p, zero, InventoryPath::flat_zero(other)), DomainError);
}

TEST_CASE("shipped configs load") {
  for (const auto& e : fs::directory_iterator(RECON_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    INFO(e.path().filename().string());
    CHECK_NOTHROW(load_config(e.path()).validate());
  }
}

TEST_CASE("number format") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1234567.891234) == "1234567.891");
  CHECK(format_number(-2.5e-12) == "-2.5e-12");
}
