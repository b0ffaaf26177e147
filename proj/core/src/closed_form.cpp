#include "recon/closed_form.hpp"

#include <cmath>
#include <string>

#include "recon/errors.hpp"
#include "recon/evaluation.hpp"
#include "recon/numerics.hpp"

namespace recon {

namespace {

// sinh(k t) / sinh(k t_N) and cosh(k t) / sinh(k t_N) without forming e^{k t_N}.
double sinh_ratio(double k, double t, double tn) {
  return std::exp(k * (t - tn)) * (-std::expm1(-2.0 * k * t)) / (-std::expm1(-2.0 * k * tn));
}

double cosh_ratio(double k, double t, double tn) {
  return std::exp(k * (t - tn)) * (1.0 + std::exp(-2.0 * k * t)) / (-std::expm1(-2.0 * k * tn));
}

}  // namespace

double NoTraderSolution::shares(double t) const {
  if (is_linear()) return demand * t / horizon;
  if (t >= horizon) return demand;
  return demand * sinh_ratio(k, t, horizon);
}

double NoTraderSolution::rate(double t) const {
  if (is_linear()) return demand / horizon;
  return demand * k * cosh_ratio(k, t, horizon);
}

double NoTraderSolution::acceleration(double t) const {
  if (is_linear()) return 0.0;
  return k * k * shares(t);
}

NoTraderSolution solve_no_trader(const ImpactParams& p, const ScenarioParams& s, LambdaScaling scaling) {
  ScenarioParams alone = s;
  alone.trader_terminal = 0.0;
  const double lam = effective_lambda(p, alone, scaling);
  NoTraderSolution sol;
  sol.demand = s.demand;
  sol.horizon = s.horizon;
  sol.k = std::sqrt(2.0 * lam / (p.eta * s.demand * s.demand));
  if (sol.k * s.horizon > 700.0) {
    throw SolverError("no-trader: k t_N = " + std::to_string(sol.k * s.horizon) +
                      " overflows; rescale lambda");
  }
  return sol;
}

InventoryPath no_trader_path(const NoTraderSolution& sol, std::size_t grid_points) {
  const auto grid = numerics::uniform_grid(sol.horizon, grid_points);
  return InventoryPath::sample(
      grid, [&](double t) { return sol.shares(t); }, [&](double t) { return sol.rate(t); }, sol.demand);
}

InventoryPath no_trader_path(const ImpactParams& p, const ScenarioParams& s, std::size_t grid_points,
                             LambdaScaling scaling) {
  return no_trader_path(solve_no_trader(p, s, scaling), grid_points);
}

double no_trader_cost_closed_form(const ImpactParams& p, const ScenarioParams& s, LambdaScaling scaling) {
  const NoTraderSolution sol = solve_no_trader(p, s, scaling);
  const double d = s.demand;
  const double tn = s.horizon;
  const double base = d * (p.s0 + p.epsilon) + 0.5 * p.gamma * d * d;
  if (sol.is_linear()) return base + p.eta * d * d / tn;
  const double z = sol.k * tn;
  const double q = std::exp(-2.0 * z);
  const double coth = 1.0 / std::tanh(z);
  const double z_over_sinh2 = 4.0 * z * q / ((1.0 - q) * (1.0 - q));
  return base + p.eta * d * d * 0.5 * sol.k * (coth + z_over_sinh2);
}

EvaluationReport evaluate_no_trader(const ImpactParams& p, const ScenarioParams& s,
                                    const Conventions& conv) {
  ScenarioParams alone = s;
  alone.trader_terminal = 0.0;
  const NoTraderSolution sol = solve_no_trader(p, alone, conv.lambda_scaling);
  const auto grid = evaluation_grid(p, alone, conv);
  const InventoryPath y = InventoryPath::sample(
      grid, [&](double t) { return sol.shares(t); }, [&](double t) { return sol.rate(t); }, sol.demand);
  return evaluate_paths(p, alone, InventoryPath::flat_zero(grid), y, conv);
}

double LinearScenario::trader_shares(double t) const { return trader_terminal * t / horizon; }

double LinearScenario::trader_rate(double) const { return trader_terminal / horizon; }

double LinearScenario::manager_shares(double t) const {
  if (t <= start_day) return 0.0;
  return manager_fraction * demand * (t - start_day) / (horizon - start_day);
}

double LinearScenario::manager_rate(double t) const {
  const double slope = manager_fraction * demand / (horizon - start_day);
  if (t < start_day) return 0.0;
  if (t == start_day && start_day > 0.0) return 0.5 * slope;
  return slope;
}

LinearScenario make_linear_scenario(const ScenarioParams& s) {
  if (!(s.start_day >= 0.0 && s.start_day < s.horizon)) {
    throw DomainError("linear regime: start day must lie in [0, t_N)");
  }
  return {s.trader_terminal, s.demand, s.manager_fraction, s.start_day, s.horizon};
}

InventoryPath linear_trader_path(const LinearScenario& ls, std::size_t grid_points) {
  const auto grid = numerics::uniform_grid(ls.horizon, grid_points);
  return InventoryPath::sample(
      grid, [&](double t) { return ls.trader_shares(t); }, [&](double t) { return ls.trader_rate(t); },
      ls.trader_terminal);
}

InventoryPath linear_manager_path(const LinearScenario& ls, std::size_t grid_points) {
  auto grid = numerics::uniform_grid(ls.horizon, grid_points);
  // Snap the node nearest the kink onto start_day so the one-sided rates average there.
  const double n = static_cast<double>(grid_points - 1);
  const auto j = static_cast<std::size_t>(std::llround(ls.start_day / ls.horizon * n));
  if (j > 0 && j + 1 < grid_points && std::abs(grid[j] - ls.start_day) < 1e-9 * ls.horizon) {
    grid[j] = ls.start_day;
  }
  return InventoryPath::sample(
      grid, [&](double t) { return ls.manager_shares(t); }, [&](double t) { return ls.manager_rate(t); },
      ls.manager_fraction * ls.demand);
}

std::size_t linear_grid_points(const ScenarioParams& s, std::size_t requested) {
  std::size_t n = requested > 3 ? requested - 1 : 2;
  if (n % 2 == 1) ++n;
  if (s.start_day == 0.0) return n + 1;
  const double ratio = s.start_day / s.horizon;
  for (std::size_t m = n; m < n + 4096; m += 2) {
    const double pos = ratio * static_cast<double>(m);
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-9 * std::max(1.0, pos) && static_cast<long long>(r) % 2 == 0) return m + 1;
  }
  return n + 1;
}

double linear_savings(const ImpactParams& p, const ScenarioParams& s) {
  const LinearScenario ls = make_linear_scenario(s);
  const double fd = ls.manager_fraction * ls.demand;
  const double d = ls.demand;
  const double t = ls.trader_terminal;
  const double tn = ls.horizon;
  return fd * (p.gamma * d + p.eta * (d - t) / p.dt_bench - p.eta * (t / tn + fd / (tn - ls.start_day))) -
         p.gamma * fd * (t * (tn + ls.start_day) / (2.0 * tn) + 0.5 * fd);
}

double linear_te_bps(const ImpactParams& p, const ScenarioParams& s) {
  const LinearScenario ls = make_linear_scenario(s);
  return 1e4 * p.w_bench * p.daily_vol() * ls.manager_fraction * std::sqrt((ls.horizon - ls.start_day) / 3.0);
}

EvaluationReport evaluate_linear(const ImpactParams& p, const ScenarioParams& s, const Conventions& conv) {
  const LinearScenario ls = make_linear_scenario(s);
  Conventions c = conv;
  if (c.evaluation == CostEvaluation::Continuous) c.grid_points = linear_grid_points(s, conv.grid_for(s.horizon));
  const auto grid = evaluation_grid(p, s, c);
  const InventoryPath y = linear_manager_path(ls, grid.size());
  const InventoryPath x = InventoryPath::sample(
      y.times(), [&](double t) { return ls.trader_shares(t); }, [&](double t) { return ls.trader_rate(t); },
      ls.trader_terminal);
  // Both paths are linear between nodes once the kink is on a node, so the
  // interpolant integral is exact. Simpson would see the rate jump at d.
  constexpr Integration rule = Integration::PiecewiseLinear;
  const TraderOutcome trader = trader_cost_and_profit(p, s, x, y, c.proceeds, rule);
  return make_report(p, s, manager_cost(p, s, x, y, rule), tracking_error_bps(p, s, y, rule), trader,
                     c.proceeds);
}

}  // namespace recon
