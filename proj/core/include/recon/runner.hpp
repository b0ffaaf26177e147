#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recon/conventions.hpp"
#include "recon/market_model.hpp"
#include "recon/oracle.hpp"
#include "recon/path.hpp"

namespace recon {

inline constexpr int kConfigSchemaVersion = 1;

using Axis = std::optional<std::vector<double>>;

/// Sweep axes. An axis the regime does not use must be left unset; a set axis
/// must not be empty.
struct SweepLists {
  Axis lambda;            ///< required
  Axis demand;            ///< required
  Axis participation;     ///< T / D; required for nash and stackelberg, default 0 for linear
  Axis manager_fraction;  ///< linear only, required there
  Axis start_day;         ///< linear only, required there
  Axis tau;               ///< stackelberg only, required there
  Axis horizon;           ///< default 10 days
};

struct RunConfig {
  std::string name = "run";
  std::string notes;
  std::string preset = "core";
  ImpactParams params = {};
  Regime regime = Regime::NoTrader;
  SweepLists sweep;
  double aum = 50e9;
  Conventions conventions;
  bool verify = false;
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;         ///< 0: hardware concurrency
  std::size_t path_points = 201;  ///< rows per path file; 0 disables path files

  /// Throws ConfigError on empty lists, missing regime fields or invalid values.
  void validate() const;
};

/// Parses a JSON document. Unknown keys are rejected.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& file);
/// Canonical JSON with sorted keys; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const RunConfig& c, int indent = 2);

/// Cross product in fixed order: lambda, demand, participation, manager_fraction,
/// start_day, tau, horizon (last varies fastest).
struct ScenarioSpec {
  ScenarioParams scenario;
  double participation = 0.0;
};
std::vector<ScenarioSpec> expand_scenarios(const RunConfig& c);

enum class RowStatus { Ok, DomainError, SolverError };
std::string_view to_string(RowStatus s);

struct ResultRow {
  std::size_t index = 0;
  Regime regime = Regime::NoTrader;
  ScenarioParams scenario;
  double participation = 0.0;
  double lambda_eff = 0.0;
  RowStatus status = RowStatus::Ok;
  std::string message;
  EvaluationReport report;
  bool verified = false;
  oracle::VerificationReport verification;
  std::optional<InventoryPath> trader_path;
  std::optional<InventoryPath> manager_path;
};

/// Solves and evaluates one scenario. Errors are caught into the row status.
ResultRow evaluate_scenario(const RunConfig& c, std::size_t index, const ScenarioSpec& spec);

/// Evaluates every scenario, in parallel when threads != 1. Rows come back in
/// scenario order regardless of completion order.
std::vector<ResultRow> evaluate_all(const RunConfig& c);

/// Column order of results.csv.
const std::vector<std::string>& result_columns();
std::string results_csv(const std::vector<ResultRow>& rows);
std::string path_csv(const ResultRow& row, std::size_t points);
std::string manifest_json(const RunConfig& c, const std::vector<ResultRow>& rows);

struct RunSummary {
  std::vector<ResultRow> rows;
  std::vector<std::filesystem::path> files;
  std::size_t errors = 0;
  std::size_t verification_failures = 0;
};

/// Evaluates the config and writes results.csv, table files, path files and
/// manifest.json under output_dir.
RunSummary run(const RunConfig& c);

// ---- tables ----

struct TableRow {
  double lambda = 0.0;
  double demand = 0.0;
  double participation = 0.0;
  double tau = 0.0;
  double manager_fraction = 0.0;
  double start_day = 0.0;
  double savings_usd = 0.0;
  double savings_bps = 0.0;
  double tracking_error_bps = 0.0;
  double profit_usd = 0.0;
  double profit_bps = 0.0;
};

std::vector<TableRow> table_rows(const std::vector<ResultRow>& rows);
std::string table_csv(const std::vector<TableRow>& rows);
/// Inverse of table_csv. Throws ConfigError on a malformed document.
std::vector<TableRow> parse_table_csv(std::string_view text);
/// Plain-text layout with the column structure of the regime's summary table.
std::string table_text(Regime regime, const std::vector<TableRow>& rows);

struct TableFiles {
  std::string csv;
  std::string text;
};
TableFiles make_tables(Regime regime, const std::vector<ResultRow>& rows);

// ---- price path ----

struct PricePathRecord {
  double time = 0.0;
  double mid = 0.0;         ///< S0 + gamma (x + y)
  double execution = 0.0;   ///< mid + eta (x' + y') + epsilon
  double cum_return = 0.0;  ///< mid / S0 - 1
};

/// Throws DomainError when the paths are on different grids.
std::vector<PricePathRecord> emit_price_path(const ImpactParams& p, const InventoryPath& x,
                                             const InventoryPath& y);

/// Pre-reconstitution price build-up split into its parts, as fractions of S0.
struct PriceDecomposition {
  double permanent = 0.0;   ///< gamma (x + y) / S0 at t_N-
  double temporary = 0.0;   ///< eta (x' + y') / S0 at t_N-
  double spread = 0.0;      ///< epsilon / S0
  double cum_return = 0.0;  ///< mid-price return at t_N-
};

PriceDecomposition decompose_price_path(const ImpactParams& p, const InventoryPath& x,
                                        const InventoryPath& y);

/// The trader builds T against a manager who waits for t_N (y = 0 before t_N).
/// The trader's best response is then the straight line T t / t_N.
struct PricePathScenario {
  InventoryPath trader;
  InventoryPath manager;
  std::vector<PricePathRecord> records;
  PriceDecomposition decomposition;
};

PricePathScenario price_path_scenario(const ImpactParams& p, const ScenarioParams& s,
                                      std::size_t grid_points);

std::string price_path_csv(const std::vector<PricePathRecord>& records);

/// printf("%.10g") for every float written by the runner.
std::string format_number(double v);

}  // namespace recon
