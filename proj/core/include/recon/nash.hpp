#pragma once

#include <cstddef>

#include "recon/closed_form.hpp"
#include "recon/conventions.hpp"
#include "recon/market_model.hpp"
#include "recon/path.hpp"

namespace recon {

/// Simultaneous-move equilibrium. Integrating the trader's Euler-Lagrange
/// equation once gives
///   x' = -y'/2 - (gamma / 2 eta) y + K1,
/// and substituting into the manager's equation leaves
///   (3/2) eta y'' - gamma y' - (gamma^2 / 2 eta + 2 lambda / D^2) y + gamma K1 = 0,
/// so y = y_p + C1 e^{r1 t} + C2 e^{r2 t}. K1 is pinned by x(t_N) = T.
struct NashSolution {
  enum class Form {
    Exponential,  ///< the general two-root solution
    Linear,       ///< gamma = 0 and lambda_eff = 0: both players build linearly
    TraderAbsent  ///< T = 0: the trader stays out and the manager plays the no-trader optimum
  };

  Form form = Form::Exponential;
  double r1 = 0.0;
  double r2 = 0.0;
  double c1 = 0.0;
  double c1_scaled = 0.0;  ///< C1 e^{r1 t_N}, kept so large r1 t_N never forms e^{r1 t_N} alone
  double c2 = 0.0;
  double k1 = 0.0;
  double y_p = 0.0;
  double b_end = 1.0;  ///< e^{r1 t_N}
  double c_end = 1.0;  ///< e^{r2 t_N}

  double demand = 0.0;
  double trader_terminal = 0.0;
  double horizon = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double lambda_eff = 0.0;
  NoTraderSolution no_trader{};

  double manager_shares(double t) const;
  double manager_rate(double t) const;
  double manager_acceleration(double t) const;
  double trader_shares(double t) const;
  double trader_rate(double t) const;
};

enum class K1Method {
  Affine,    ///< x(t_N) assembled as a K1 + b and solved exactly
  Bisection  ///< bracket [-10 D / t_N, 10 D / t_N]
};

/// Throws SolverError when t_N |r1 - r2| < 1e-12 or r1 t_N > 700.
NashSolution solve_nash(const ImpactParams& p, const ScenarioParams& s,
                        LambdaScaling scaling = LambdaScaling::BenchmarkCost,
                        K1Method method = K1Method::Affine);

InventoryPath nash_x_path(const NashSolution& sol, std::size_t grid_points);
InventoryPath nash_y_path(const NashSolution& sol, std::size_t grid_points);

struct PlayerCosts {
  double manager = 0.0;
  double trader = 0.0;
};

/// Exact integrals of both cost functionals on the closed-form paths.
PlayerCosts nash_costs_closed_form(const ImpactParams& p, const NashSolution& sol);

EvaluationReport evaluate_nash(const ImpactParams& p, const ScenarioParams& s,
                               const NashSolution& sol, const Conventions& conv);

}  // namespace recon
