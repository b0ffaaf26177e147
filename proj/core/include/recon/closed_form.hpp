#pragma once

#include <cstddef>

#include "recon/conventions.hpp"
#include "recon/market_model.hpp"
#include "recon/path.hpp"

namespace recon {

/// Manager optimum with no trader:
///   y(t) = D sinh(k t) / sinh(k t_N),  k = sqrt(2 lambda_eff / (eta D^2)).
struct NoTraderSolution {
  double k = 0.0;
  double demand = 0.0;
  double horizon = 0.0;

  /// k t_N below 1e-6 is treated as the straight line D t / t_N.
  bool is_linear() const { return k * horizon < 1e-6; }
  double shares(double t) const;
  double rate(double t) const;
  double acceleration(double t) const;
};

/// Throws SolverError when k t_N > 700.
NoTraderSolution solve_no_trader(const ImpactParams& p, const ScenarioParams& s,
                                 LambdaScaling scaling = LambdaScaling::BenchmarkCost);

InventoryPath no_trader_path(const NoTraderSolution& sol, std::size_t grid_points);
InventoryPath no_trader_path(const ImpactParams& p, const ScenarioParams& s, std::size_t grid_points,
                             LambdaScaling scaling = LambdaScaling::BenchmarkCost);

/// Closed-form manager cost on the no-trader optimum. The linear limit
/// D S0 + gamma D^2/2 + eta D^2/t_N + eps D is used when k t_N < 1e-6.
double no_trader_cost_closed_form(const ImpactParams& p, const ScenarioParams& s,
                                  LambdaScaling scaling = LambdaScaling::BenchmarkCost);

EvaluationReport evaluate_no_trader(const ImpactParams& p, const ScenarioParams& s,
                                    const Conventions& conv);

/// Both players build linearly: x(t) = T t / t_N and, for the manager,
/// y(t) = f D (t - d) / (t_N - d) on [d, t_N], zero before d. The remaining
/// (1 - f) D is bought at t_N.
struct LinearScenario {
  double trader_terminal = 0.0;
  double demand = 0.0;
  double manager_fraction = 0.0;
  double start_day = 0.0;
  double horizon = 0.0;

  double trader_shares(double t) const;
  double trader_rate(double t) const;
  double manager_shares(double t) const;
  double manager_rate(double t) const;
};

/// Throws DomainError if start_day >= horizon.
LinearScenario make_linear_scenario(const ScenarioParams& s);

InventoryPath linear_trader_path(const LinearScenario& ls, std::size_t grid_points);
InventoryPath linear_manager_path(const LinearScenario& ls, std::size_t grid_points);

/// Grid size close to `requested` that puts start_day on an even node, so the
/// kink in y sits on a Simpson panel boundary whenever d is commensurate.
std::size_t linear_grid_points(const ScenarioParams& s, std::size_t requested);

/// Savings from buying f D linearly from day d.
double linear_savings(const ImpactParams& p, const ScenarioParams& s);

/// 1e4 * w * sigma_daily * f * sqrt((t_N - d) / 3)
double linear_te_bps(const ImpactParams& p, const ScenarioParams& s);

EvaluationReport evaluate_linear(const ImpactParams& p, const ScenarioParams& s,
                                 const Conventions& conv);

}  // namespace recon
