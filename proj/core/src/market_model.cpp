#include "recon/market_model.hpp"

#include <cmath>
#include <string>

#include "recon/errors.hpp"
#include "recon/numerics.hpp"

namespace recon {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

double rate_sum(const std::vector<double>& a, const std::vector<double>& b, std::size_t i) {
  return a[i] + b[i];
}

void require_same_grid(const InventoryPath& x, const InventoryPath& y) {
  if (!x.same_grid(y)) throw DomainError("trader and manager paths are on different grids");
}

// Integral of (S0 + eps + gamma (x + y) + eta (x' + y')) * z' where z is x or y.
double cost_integral(const ImpactParams& p, const InventoryPath& x, const InventoryPath& y,
                     bool trader, Integration rule) {
  require_same_grid(x, y);
  const auto& xs = x.shares();
  const auto& ys = y.shares();
  const auto& t = x.times();
  const std::size_t n = x.size();
  const double base = p.s0 + p.epsilon;

  if (rule == Integration::PiecewiseLinear) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = t[i + 1] - t[i];
      const double u = xs[i + 1] - xs[i];
      const double v = ys[i + 1] - ys[i];
      const double w = trader ? u : v;
      const double level = 0.5 * (xs[i] + xs[i + 1] + ys[i] + ys[i + 1]);
      total += w * (base + p.gamma * level) + p.eta * (u + v) * w / h;
    }
    return total;
  }

  const auto xd = x.rates();
  const auto yd = y.rates();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double price = base + p.gamma * (xs[i] + ys[i]) + p.eta * rate_sum(xd, yd, i);
    f[i] = price * (trader ? xd[i] : yd[i]);
  }
  return numerics::simpson(f, x.step());
}

}  // namespace

void ImpactParams::validate() const {
  require(std::isfinite(s0) && s0 > 0.0, "s0 must be positive");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be non-negative");
  require(std::isfinite(eta) && eta > 0.0, "eta must be positive");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be non-negative");
  require(std::isfinite(sigma_annual) && sigma_annual >= 0.0, "sigma_annual must be non-negative");
  require(std::isfinite(w_bench) && w_bench >= 0.0 && w_bench <= 1.0, "w_bench must lie in [0, 1]");
  require(std::isfinite(dt_bench) && dt_bench > 0.0, "dt_bench must be positive");
}

double ImpactParams::daily_vol() const { return sigma_annual / std::sqrt(252.0); }

ImpactParams preset(std::string_view name) {
  ImpactParams p;
  if (name == "large-cap") {
    p.s0 = 100.0; p.w_bench = 0.01; p.sigma_annual = 0.25;
    p.gamma = 1e-7; p.eta = 1e-6; p.epsilon = 0.005;
  } else if (name == "mid-cap") {
    p.s0 = 50.0; p.w_bench = 0.002; p.sigma_annual = 0.35;
    p.gamma = 5e-7; p.eta = 5e-6; p.epsilon = 0.02;
  } else if (name == "small-cap") {
    p.s0 = 30.0; p.w_bench = 0.0005; p.sigma_annual = 0.50;
    p.gamma = 1e-6; p.eta = 1e-5; p.epsilon = 0.05;
  } else if (name == "core") {
    // defaults
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return p;
}

std::vector<std::string_view> preset_names() { return {"large-cap", "mid-cap", "small-cap", "core"}; }

void ScenarioParams::validate() const {
  require(std::isfinite(demand) && demand > 0.0, "demand must be positive");
  require(std::isfinite(trader_terminal) && trader_terminal >= 0.0, "trader terminal must be non-negative");
  require(std::isfinite(horizon) && horizon > 0.0, "horizon must be positive");
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be non-negative");
  require(std::isfinite(manager_fraction) && manager_fraction >= 0.0 && manager_fraction <= 1.0,
          "manager fraction must lie in [0, 1]");
  require(std::isfinite(start_day) && start_day >= 0.0 && start_day < horizon,
          "start day must lie in [0, t_N)");
  require(std::isfinite(tau) && tau > 0.0, "tau must be positive");
  require(std::isfinite(aum) && aum > 0.0, "aum must be positive");
}

ScenarioParams with_participation(ScenarioParams s, double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("participation must lie in [0, 1]");
  s.trader_terminal = f * s.demand;
  return s;
}

double execution_price(const ImpactParams& p, double cum_flow, double rate, Side side) {
  if (!std::isfinite(cum_flow) || !std::isfinite(rate)) throw DomainError("execution_price: non-finite input");
  return p.s0 + p.gamma * cum_flow + p.eta * rate + static_cast<double>(static_cast<int>(side)) * p.epsilon;
}

double benchmark_cost(const ImpactParams& p, const ScenarioParams& s) {
  const double d = s.demand;
  return d * (p.s0 + p.gamma * d + p.eta * (d - s.trader_terminal) / p.dt_bench + p.epsilon);
}

double benchmark_cost_without_trader(const ImpactParams& p, const ScenarioParams& s) {
  ScenarioParams alone = s;
  alone.trader_terminal = 0.0;
  return benchmark_cost(p, alone);
}

double manager_cost(const ImpactParams& p, const ScenarioParams& s, const InventoryPath& x,
                    const InventoryPath& y, Integration rule) {
  double cost = cost_integral(p, x, y, false, rule);
  const double gap = s.demand - y.final_shares();
  if (gap > 0.0) cost += gap / s.demand * benchmark_cost(p, s);
  return cost;
}

double trader_sale_price(const ImpactParams& p, const ScenarioParams& s, ProceedsConvention c) {
  double price = p.s0 + p.gamma * s.demand - p.epsilon;
  if (c == ProceedsConvention::BenchmarkRate) price += p.eta * (s.demand - s.trader_terminal) / p.dt_bench;
  return price;
}

TraderOutcome trader_cost_and_profit(const ImpactParams& p, const ScenarioParams& s,
                                     const InventoryPath& x, const InventoryPath& y,
                                     ProceedsConvention proceeds, Integration rule) {
  TraderOutcome out;
  if (s.trader_terminal == 0.0) return out;
  out.cost = cost_integral(p, x, y, true, rule);
  out.proceeds = s.trader_terminal * trader_sale_price(p, s, proceeds);
  out.profit = out.proceeds - out.cost;
  return out;
}

double tracking_error_bps(const ImpactParams& p, const ScenarioParams& s, const InventoryPath& y,
                          Integration rule) {
  const auto& ys = y.shares();
  const std::size_t n = y.size();
  double integral = 0.0;
  if (rule == Integration::PiecewiseLinear) {
    const auto& t = y.times();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double a = ys[i] / s.demand;
      const double b = ys[i + 1] / s.demand;
      integral += (t[i + 1] - t[i]) * (a * a + a * b + b * b) / 3.0;
    }
  } else {
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] / s.demand;
      f[i] = r * r;
    }
    integral = numerics::simpson(f, y.step());
  }
  return 1e4 * p.w_bench * p.daily_vol() * std::sqrt(std::max(0.0, integral));
}

double expost_te_adjustment(double te_base, double t_n, double mean_sq_dr) {
  const double extra = t_n / 252.0 * mean_sq_dr;
  if (extra == 0.0) return 0.0;
  // sqrt(a^2 + e) - a written without the cancellation
  return extra / (std::sqrt(te_base * te_base + extra) + te_base);
}

double drag_bps(double savings_usd, double aum) {
  if (!(aum > 0.0)) throw DomainError("drag_bps: aum must be positive");
  return (1e4 * savings_usd) / aum;
}

EvaluationReport make_report(const ImpactParams& p, const ScenarioParams& s, double manager_cost_usd,
                             double tracking_error, const TraderOutcome& trader,
                             ProceedsConvention proceeds) {
  EvaluationReport r;
  r.cost_usd = manager_cost_usd;
  r.benchmark_cost_usd = benchmark_cost(p, s);
  r.savings_usd = r.benchmark_cost_usd - r.cost_usd;
  r.savings_bps = 1e4 * r.savings_usd / r.benchmark_cost_usd;
  r.tracking_error_bps = tracking_error;
  r.trader_cost_usd = trader.cost;
  r.trader_profit_usd = trader.profit;
  if (s.trader_terminal > 0.0) {
    r.trader_profit_bps = 1e4 * trader.profit / (s.trader_terminal * trader_sale_price(p, s, proceeds));
  }
  r.benchmark_no_trader_usd = benchmark_cost_without_trader(p, s);
  r.savings_no_trader_usd = r.benchmark_no_trader_usd - r.cost_usd;
  r.savings_no_trader_bps = 1e4 * r.savings_no_trader_usd / r.benchmark_no_trader_usd;
  r.drag_bps = drag_bps(r.savings_usd, s.aum);
  return r;
}

}  // namespace recon
