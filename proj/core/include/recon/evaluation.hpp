#pragma once

#include <vector>

#include "recon/conventions.hpp"
#include "recon/market_model.hpp"
#include "recon/path.hpp"

namespace recon {

/// Grid the reporting functionals run on: the fine Simpson grid, or one node per
/// dt_bench for stepwise evaluation.
std::vector<double> evaluation_grid(const ImpactParams& p, const ScenarioParams& s,
                                    const Conventions& conv);

/// Manager cost, trader outcome and tracking error for one path pair.
EvaluationReport evaluate_paths(const ImpactParams& p, const ScenarioParams& s,
                                const InventoryPath& x, const InventoryPath& y,
                                const Conventions& conv);

}  // namespace recon
