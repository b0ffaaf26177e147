#pragma once

#include <string_view>
#include <vector>

#include "recon/path.hpp"

namespace recon {

/// Market and impact coefficients shared by every regime. Time is in days.
struct ImpactParams {
  double s0 = 50.0;            ///< initial price, USD/share
  double gamma = 1e-7;         ///< permanent impact, USD/share^2
  double eta = 1e-6;           ///< temporary impact, USD*day/share^2
  double epsilon = 0.01;       ///< half-spread, USD/share
  double sigma_annual = 0.30;  ///< annualised return volatility
  double w_bench = 0.01;       ///< index weight of the added name at t_N
  double dt_bench = 1.0;       ///< window over which the benchmark buys, days

  void validate() const;
  /// sigma_annual / sqrt(252)
  double daily_vol() const;
};

/// Named parameter sets: "large-cap", "mid-cap", "small-cap", "core".
ImpactParams preset(std::string_view name);
std::vector<std::string_view> preset_names();

/// Game knobs. Shares bought from other participants before t_N are fixed at zero,
/// so the benchmark buys everything the trader does not supply on the last day.
struct ScenarioParams {
  double demand = 5e6;            ///< D, shares the manager needs at t_N
  double trader_terminal = 0.0;   ///< T, trader inventory at t_N
  double horizon = 10.0;          ///< t_N, days
  double lambda = 0.0;            ///< tracking-error weight, 1/day
  double manager_fraction = 1.0;  ///< linear regime: share of D bought before t_N
  double start_day = 0.0;         ///< linear regime: first day of manager buying
  double tau = 1.0;               ///< Stackelberg front-loading constant, days
  double aum = 50e9;              ///< fund AUM, USD (drag only)

  void validate() const;
  /// T / D
  double participation() const { return trader_terminal / demand; }
};

/// Sets T = f * D (game regimes).
ScenarioParams with_participation(ScenarioParams s, double f);

enum class Side { Buy = 1, Sell = -1 };

/// S0 + gamma * cum_flow + eta * rate +/- epsilon.
double execution_price(const ImpactParams& p, double cum_flow, double rate, Side side);

/// D * [S0 + gamma D + eta (D - T) / dt + epsilon]: the manager buys all D on the
/// last day while the trader's T shares cancel part of the rate.
double benchmark_cost(const ImpactParams& p, const ScenarioParams& s);

/// Benchmark with no liquidity provider (T = 0).
double benchmark_cost_without_trader(const ImpactParams& p, const ScenarioParams& s);

enum class Integration {
  Simpson,         ///< composite Simpson on the path grid
  PiecewiseLinear  ///< exact integral of the linear interpolant between nodes
};

/// Manager's execution cost for y against the trader's x. A path that stops short
/// of D buys the remainder at t_N at benchmark terms, (D - y(t_N)) / D * benchmark.
double manager_cost(const ImpactParams& p, const ScenarioParams& s, const InventoryPath& x,
                    const InventoryPath& y, Integration rule = Integration::Simpson);

enum class ProceedsConvention {
  /// T (S0 + gamma D - epsilon): no temporary term in the sale price.
  Conservative,
  /// T (S0 + gamma D + eta (D - T) / dt - epsilon): the trader sells into the
  /// benchmark-rate price the manager pays on the last day.
  BenchmarkRate
};

double trader_sale_price(const ImpactParams& p, const ScenarioParams& s, ProceedsConvention c);

struct TraderOutcome {
  double cost = 0.0;
  double proceeds = 0.0;
  double profit = 0.0;
};

TraderOutcome trader_cost_and_profit(const ImpactParams& p, const ScenarioParams& s,
                                     const InventoryPath& x, const InventoryPath& y,
                                     ProceedsConvention proceeds = ProceedsConvention::Conservative,
                                     Integration rule = Integration::Simpson);

/// 1e4 * w * sigma_daily * sqrt(int (y/D)^2 dt), time in days.
double tracking_error_bps(const ImpactParams& p, const ScenarioParams& s, const InventoryPath& y,
                          Integration rule = Integration::Simpson);

/// sqrt(TE^2 + t_N / 252 * <dr^2>) - TE
double expost_te_adjustment(double te_base, double t_n, double mean_sq_dr);

/// 1e4 * savings / AUM
double drag_bps(double savings_usd, double aum);

struct EvaluationReport {
  double cost_usd = 0.0;
  double benchmark_cost_usd = 0.0;
  double savings_usd = 0.0;
  double savings_bps = 0.0;
  double tracking_error_bps = 0.0;
  double trader_cost_usd = 0.0;
  double trader_profit_usd = 0.0;
  double trader_profit_bps = 0.0;  ///< relative to T times the sale price
  double benchmark_no_trader_usd = 0.0;
  double savings_no_trader_usd = 0.0;
  double savings_no_trader_bps = 0.0;
  double drag_bps = 0.0;
};

/// Assembles a report so that savings_usd == benchmark_cost_usd - cost_usd exactly.
EvaluationReport make_report(const ImpactParams& p, const ScenarioParams& s, double manager_cost_usd,
                             double tracking_error, const TraderOutcome& trader,
                             ProceedsConvention proceeds);

}  // namespace recon
