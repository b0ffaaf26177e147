#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "recon/market_model.hpp"

namespace recon {

enum class Regime { NoTrader, Linear, Nash, Stackelberg };

/// How the tracking-error weight enters the Euler-Lagrange equations.
enum class LambdaScaling {
  /// lambda * benchmark_cost: puts the penalty on the same scale as the cost term.
  BenchmarkCost,
  /// lambda used as given.
  Raw
};

/// How costs and tracking error are integrated for reporting.
enum class CostEvaluation {
  /// Simpson on the fine grid with analytic rates.
  Continuous,
  /// Paths sampled every dt_bench days, linear in between, integrated exactly.
  Stepwise
};

enum class BenchmarkReporting {
  Standard,  ///< savings against D [S0 + gamma D + eta (D - T)/dt + eps]
  Both   ///< additionally against the T = 0 benchmark
};

struct Conventions {
  LambdaScaling lambda_scaling = LambdaScaling::BenchmarkCost;
  ProceedsConvention proceeds = ProceedsConvention::Conservative;
  CostEvaluation evaluation = CostEvaluation::Continuous;
  BenchmarkReporting benchmark = BenchmarkReporting::Standard;
  /// Fine-grid size; 0 selects default_grid_points(horizon).
  std::size_t grid_points = 0;

  std::size_t grid_for(double horizon) const;
};

/// 200 intervals per day plus one: 2001 points over 10 days.
std::size_t default_grid_points(double horizon);

/// The single place where lambda becomes the coefficient used by the solvers.
double effective_lambda(const ImpactParams& p, const ScenarioParams& s, LambdaScaling scaling);

/// Number of dt_bench steps in the horizon; throws DomainError unless integral.
std::size_t stepwise_intervals(const ImpactParams& p, double horizon);

std::string_view to_string(Regime r);
std::string_view to_string(LambdaScaling v);
std::string_view to_string(ProceedsConvention v);
std::string_view to_string(CostEvaluation v);
std::string_view to_string(BenchmarkReporting v);

Regime parse_regime(std::string_view s);
LambdaScaling parse_lambda_scaling(std::string_view s);
ProceedsConvention parse_proceeds(std::string_view s);
CostEvaluation parse_evaluation(std::string_view s);
BenchmarkReporting parse_benchmark(std::string_view s);

}  // namespace recon
