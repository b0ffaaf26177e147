#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "recon/closed_form.hpp"
#include "recon/errors.hpp"

using namespace recon;
namespace fz = oracles::frozen;

namespace {

ScenarioParams scenario(double d, double lambda) {
  ScenarioParams s;
  s.demand = d;
  s.lambda = lambda;
  return s;
}

// Manager cost of D sinh(kt)/sinh(k t_N), integrated independently.
double reference_cost(const ImpactParams& p, double d, double tn, long double k) {
  oracles::Model m;
  m.gamma = p.gamma;
  auto y = [&](long double t) { return d * std::sinh(k * t) / std::sinh(k * tn); };
  auto yd = [&](long double t) { return d * k * std::cosh(k * t) / std::sinh(k * tn); };
  return static_cast<double>(oracles::integrate(
      [&](long double t) { return (m.s0 + m.eps + m.gamma * y(t) + m.eta * yd(t)) * yd(t); }, 0, tn, 1e-6L));
}

}  // namespace

TEST_CASE("no-trader path") {
  const ImpactParams p;
  SUBCASE("lambda = 0 is the ramp") {
    const auto sol = solve_no_trader(p, scenario(1e6, 0.0));
    CHECK(sol.is_linear());
    CHECK(sol.shares(2.5) == doctest::Approx(2.5e5).epsilon(1e-15));
  }
  SUBCASE("k t_N = 10 back-loads") {
    // k = sqrt(2 lambda / (eta D^2)) = 1 with raw lambda = eta D^2 / 2
    const auto sol = solve_no_trader(p, scenario(1e6, 5e5), LambdaScaling::Raw);
    CHECK(sol.k == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sol.shares(5.0) / 1e6 == doctest::Approx(fz::sinh5_over_sinh10).epsilon(1e-13));
    CHECK(sol.shares(10.0) == 1e6);
  }
  SUBCASE("large k stays finite") {
    const auto sol = solve_no_trader(p, scenario(1e6, 0.5 * 60.0 * 60.0 * 1e6), LambdaScaling::Raw);
    CHECK(sol.k * 10.0 == doctest::Approx(600.0));
    CHECK(std::isfinite(sol.shares(9.99)));
    CHECK(sol.shares(10.0) == doctest::Approx(1e6));
  }
  SUBCASE("overflow guard") {
    CHECK_THROWS_AS(solve_no_trader(p, scenario(1e6, 0.5 * 71.0 * 71.0 * 1e6), LambdaScaling::Raw),
                    SolverError);
  }
}

TEST_CASE("increasing lambda defers trading") {
  const ImpactParams p;
  double prev = 1e300;
  for (double lambda : {0.0, 0.01, 0.4, 10.0}) {
    const auto sol = solve_no_trader(p, scenario(1e6, lambda));
    const double mid = sol.shares(5.0);
    CHECK(mid < prev);
    prev = mid;
  }
}

TEST_CASE("no-trader closed-form cost") {
  ImpactParams p;
  p.gamma = 1e-8;
  CHECK(no_trader_cost_closed_form(p, scenario(1e6, 0.0)) == doctest::Approx(fz::ramp_cost_1e6).epsilon(1e-14));

  p.gamma = 1e-7;
  for (double lambda : {1e3, 1e5, 5e5, 1e7}) {
    const auto s = scenario(2e6, lambda);
    const auto sol = solve_no_trader(p, s, LambdaScaling::Raw);
    const double ref = reference_cost(p, s.demand, s.horizon, sol.k);
    CHECK(no_trader_cost_closed_form(p, s, LambdaScaling::Raw) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("no-trader evaluation matches closed form") {
  const ImpactParams p;
  const auto s = scenario(5e6, 0.4);
  const auto r = evaluate_no_trader(p, s, Conventions{});
  CHECK(r.cost_usd == doctest::Approx(no_trader_cost_closed_form(p, s)).epsilon(1e-8));
  CHECK(r.savings_usd + r.cost_usd == r.benchmark_cost_usd);
}

TEST_CASE("linear savings") {
  ImpactParams p;
  p.gamma = 1e-8;
  ScenarioParams s = scenario(1e6, 0.0);
  s.manager_fraction = 1.0;
  CHECK(linear_savings(p, s) == doctest::Approx(fz::linear_savings_example).epsilon(1e-12));
  s.manager_fraction = 0.0;
  CHECK(linear_savings(p, s) == 0.0);
}

TEST_CASE("linear savings agree with the evaluated path") {
  const ImpactParams p;
  for (double f : {0.3, 1.0}) {
    for (double d : {0.0, 2.0, 3.7}) {
      for (double t : {0.0, 4e5}) {
        ScenarioParams s = scenario(2e6, 0.0);
        s.manager_fraction = f;
        s.start_day = d;
        s.trader_terminal = t;
        const auto r = evaluate_linear(p, s, Conventions{});
        CHECK(r.savings_usd == doctest::Approx(linear_savings(p, s)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("savings are affine in trader supply") {
  // The benchmark gets cheaper as T grows and the early fraction pays more
  // impact, so S_f falls with slope -f D [eta (1/dt + 1/t_N) + gamma (t_N + d) / (2 t_N)].
  const ImpactParams p;
  ScenarioParams s = scenario(5e6, 0.0);
  s.manager_fraction = 0.5;
  s.start_day = 1.0;
  const double fd = 0.5 * 5e6;
  const double slope = -fd * (p.eta * (1.0 + 1.0 / 10.0) + p.gamma * 11.0 / 20.0);
  const double base = linear_savings(p, s);
  for (double t : {1e6, 2e6, 4e6}) {
    s.trader_terminal = t;
    CHECK(linear_savings(p, s) == doctest::Approx(base + slope * t).epsilon(1e-12));
    CHECK(evaluate_linear(p, s, Conventions{}).savings_usd == doctest::Approx(base + slope * t).epsilon(1e-9));
  }
}

TEST_CASE("linear tracking error") {
  const ImpactParams p;
  ScenarioParams s = scenario(1e6, 0.0);
  s.manager_fraction = 1.0;
  CHECK(linear_te_bps(p, s) == doctest::Approx(fz::te_linear_ramp_bps).epsilon(1e-13));
  s.manager_fraction = 0.5;
  s.start_day = 1.0;
  CHECK(linear_te_bps(p, s) == doctest::Approx(fz::te_half_from_day1_bps).epsilon(1e-13));
  CHECK(evaluate_linear(p, s, Conventions{}).tracking_error_bps ==
        doctest::Approx(fz::te_half_from_day1_bps).epsilon(1e-8));
  s.manager_fraction = 0.0;
  CHECK(linear_te_bps(p, s) == 0.0);
}

TEST_CASE("linear grid puts the kink on an even node") {
  ScenarioParams s = scenario(1e6, 0.0);
  s.start_day = 3.7;
  const std::size_t n = linear_grid_points(s, 2001);
  CHECK(n % 2 == 1);
  const double h = s.horizon / static_cast<double>(n - 1);
  const double node = s.start_day / h;
  CHECK(std::abs(node - std::round(node)) < 1e-9);
  CHECK(static_cast<long>(std::round(node)) % 2 == 0);
}

TEST_CASE("linear start day must precede t_N") {
  ScenarioParams s = scenario(1e6, 0.0);
  s.start_day = 10.0;
  CHECK_THROWS_AS(make_linear_scenario(s), DomainError);
}
