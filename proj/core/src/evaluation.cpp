#include "recon/evaluation.hpp"

#include "recon/numerics.hpp"

namespace recon {

std::vector<double> evaluation_grid(const ImpactParams& p, const ScenarioParams& s,
                                    const Conventions& conv) {
  if (conv.evaluation == CostEvaluation::Stepwise) {
    return numerics::uniform_grid(s.horizon, stepwise_intervals(p, s.horizon) + 1);
  }
  return numerics::uniform_grid(s.horizon, conv.grid_for(s.horizon));
}

EvaluationReport evaluate_paths(const ImpactParams& p, const ScenarioParams& s,
                                const InventoryPath& x, const InventoryPath& y,
                                const Conventions& conv) {
  const Integration rule =
      conv.evaluation == CostEvaluation::Stepwise ? Integration::PiecewiseLinear : Integration::Simpson;
  const double cost = manager_cost(p, s, x, y, rule);
  const double te = tracking_error_bps(p, s, y, rule);
  const TraderOutcome trader = trader_cost_and_profit(p, s, x, y, conv.proceeds, rule);
  return make_report(p, s, cost, te, trader, conv.proceeds);
}

}  // namespace recon
