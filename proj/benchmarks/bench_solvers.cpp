#include <benchmark/benchmark.h>

#include "recon/closed_form.hpp"
#include "recon/nash.hpp"
#include "recon/oracle.hpp"
#include "recon/runner.hpp"
#include "recon/stackelberg.hpp"

using namespace recon;

namespace {

ScenarioParams scenario(double lambda, double f = 0.1, double tau = 1.0) {
  ScenarioParams s;
  s.demand = 5e6;
  s.lambda = lambda;
  s.tau = tau;
  return with_participation(s, f);
}

void BM_NoTraderEvaluate(benchmark::State& st) {
  const ImpactParams p;
  const auto s = scenario(0.4, 0.0);
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_no_trader(p, s, Conventions{}));
}
BENCHMARK(BM_NoTraderEvaluate);

void BM_NashSolve(benchmark::State& st) {
  const ImpactParams p;
  const auto s = scenario(static_cast<double>(st.range(0)) / 10.0);
  for (auto _ : st) benchmark::DoNotOptimize(solve_nash(p, s));
}
BENCHMARK(BM_NashSolve)->Arg(0)->Arg(4)->Arg(10);

void BM_StackelbergSolve(benchmark::State& st) {
  const ImpactParams p;
  const auto s = scenario(0.4, 0.1, static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_stackelberg(p, s));
}
BENCHMARK(BM_StackelbergSolve)->Arg(1)->Arg(5);

void BM_VerifyNash(benchmark::State& st) {
  const ImpactParams p;
  const auto s = scenario(0.4);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::verify_scenario(p, s, Regime::Nash));
}
BENCHMARK(BM_VerifyNash)->Unit(benchmark::kMillisecond);

void BM_BestResponse(benchmark::State& st) {
  const ImpactParams p;
  const auto s = scenario(0.4);
  const auto sol = solve_nash(p, s);
  const auto x = nash_x_path(sol, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(oracle::discrete_best_response(p, s, x, oracle::CostRole::Manager, sol.lambda_eff));
}
BENCHMARK(BM_BestResponse)->Arg(501)->Arg(2001)->Arg(8001);

void BM_Table3Sweep(benchmark::State& st) {
  RunConfig c = parse_config(R"({"schema_version": 1, "regime": "nash",
    "sweep": {"lambda": [0, 0.4, 1], "demand": [1e6, 5e6], "participation": [0.1, 0.2]},
    "conventions": {"proceeds": "benchmark_rate"}})");
  c.path_points = 0;
  c.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_all(c));
}
BENCHMARK(BM_Table3Sweep)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
