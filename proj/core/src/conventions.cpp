#include "recon/conventions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recon/errors.hpp"

namespace recon {

std::size_t default_grid_points(double horizon) {
  const double intervals = std::ceil(200.0 * horizon - 1e-9);
  auto n = static_cast<std::size_t>(std::max(2.0, intervals));
  if (n % 2 == 1) ++n;  // Simpson wants an even interval count
  return n + 1;
}

std::size_t Conventions::grid_for(double horizon) const {
  if (grid_points == 0) return default_grid_points(horizon);
  return grid_points;
}

double effective_lambda(const ImpactParams& p, const ScenarioParams& s, LambdaScaling scaling) {
  switch (scaling) {
    case LambdaScaling::BenchmarkCost:
      return s.lambda * benchmark_cost(p, s);
    case LambdaScaling::Raw:
      return s.lambda;
  }
  return s.lambda;
}

std::size_t stepwise_intervals(const ImpactParams& p, double horizon) {
  const double n = horizon / p.dt_bench;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
    throw DomainError("stepwise evaluation needs the horizon to be a whole number of dt_bench steps");
  }
  return static_cast<std::size_t>(r);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::NoTrader: return "no_trader";
    case Regime::Linear: return "linear";
    case Regime::Nash: return "nash";
    case Regime::Stackelberg: return "stackelberg";
  }
  return "?";
}

std::string_view to_string(LambdaScaling v) {
  return v == LambdaScaling::BenchmarkCost ? "benchmark_cost" : "raw";
}

std::string_view to_string(ProceedsConvention v) {
  return v == ProceedsConvention::Conservative ? "conservative" : "benchmark_rate";
}

std::string_view to_string(CostEvaluation v) {
  return v == CostEvaluation::Continuous ? "continuous" : "stepwise";
}

std::string_view to_string(BenchmarkReporting v) { return v == BenchmarkReporting::Standard ? "standard" : "both"; }

namespace {

[[noreturn]] void bad(std::string_view what, std::string_view value) {
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(value) + "'");
}

}  // namespace

Regime parse_regime(std::string_view s) {
  if (s == "no_trader" || s == "no-trader") return Regime::NoTrader;
  if (s == "linear") return Regime::Linear;
  if (s == "nash") return Regime::Nash;
  if (s == "stackelberg") return Regime::Stackelberg;
  bad("regime", s);
}

LambdaScaling parse_lambda_scaling(std::string_view s) {
  if (s == "benchmark_cost") return LambdaScaling::BenchmarkCost;
  if (s == "raw") return LambdaScaling::Raw;
  bad("lambda scaling", s);
}

ProceedsConvention parse_proceeds(std::string_view s) {
  if (s == "conservative") return ProceedsConvention::Conservative;
  if (s == "benchmark_rate") return ProceedsConvention::BenchmarkRate;
  bad("proceeds convention", s);
}

CostEvaluation parse_evaluation(std::string_view s) {
  if (s == "continuous") return CostEvaluation::Continuous;
  if (s == "stepwise") return CostEvaluation::Stepwise;
  bad("cost evaluation", s);
}

BenchmarkReporting parse_benchmark(std::string_view s) {
  if (s == "standard") return BenchmarkReporting::Standard;
  if (s == "both") return BenchmarkReporting::Both;
  bad("benchmark convention", s);
}

}  // namespace recon
