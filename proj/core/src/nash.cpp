#include "recon/nash.hpp"

#include <cmath>
#include <string>

#include "recon/errors.hpp"
#include "recon/evaluation.hpp"
#include "recon/exp_poly.hpp"
#include "recon/numerics.hpp"

namespace recon {

namespace {

using numerics::ExpPoly;

double mode_weight(double gamma, double eta, double r) { return 0.5 + gamma / (2.0 * eta * r); }

struct Amplitudes {
  double c1;
  double c1_scaled;
  double c2;
};

// C1, C2 for a given y_p, written in terms of 1/B and C/B.
Amplitudes amplitudes(double d, double y_p, double inv_b, double c, double c_over_b) {
  const double denom = 1.0 - c_over_b;
  Amplitudes a;
  a.c1_scaled = (d + y_p * (c - 1.0)) / denom;
  a.c1 = a.c1_scaled * inv_b;
  a.c2 = (-d * inv_b - y_p * (1.0 - inv_b)) / denom;
  return a;
}

struct PathPolys {
  ExpPoly x;
  ExpPoly y;
};

PathPolys path_polys(const NashSolution& sol) {
  const double tn = sol.horizon;
  PathPolys pp{ExpPoly(tn), ExpPoly(tn)};
  switch (sol.form) {
    case NashSolution::Form::Linear:
      pp.x.add_term(sol.trader_terminal / tn, 1, 0.0);
      pp.y.add_term(sol.demand / tn, 1, 0.0);
      break;
    case NashSolution::Form::TraderAbsent: {
      const NoTraderSolution& nt = sol.no_trader;
      if (nt.is_linear()) {
        pp.y.add_term(sol.demand / tn, 1, 0.0);
      } else {
        const double q = -std::expm1(-2.0 * nt.k * tn);
        pp.y.add_shifted(sol.demand / q, 0, nt.k, tn);
        pp.y.add_term(-sol.demand * std::exp(-nt.k * tn) / q, 0, -nt.k);
      }
      break;
    }
    case NashSolution::Form::Exponential: {
      const double a1 = mode_weight(sol.gamma, sol.eta, sol.r1);
      const double a2 = mode_weight(sol.gamma, sol.eta, sol.r2);
      pp.y.add_term(sol.y_p, 0, 0.0);
      pp.y.add_shifted(sol.c1_scaled, 0, sol.r1, tn);
      pp.y.add_term(sol.c2, 0, sol.r2);
      pp.x.add_shifted(-a1 * sol.c1_scaled, 0, sol.r1, tn);
      pp.x.add_term(-a2 * sol.c2, 0, sol.r2);
      pp.x.add_term(a1 * sol.c1 + a2 * sol.c2, 0, 0.0);
      pp.x.add_term(sol.k1 - sol.gamma / (2.0 * sol.eta) * sol.y_p, 1, 0.0);
      break;
    }
  }
  return pp;
}

}  // namespace

double NashSolution::manager_shares(double t) const {
  switch (form) {
    case Form::Linear: return demand * t / horizon;
    case Form::TraderAbsent: return no_trader.shares(t);
    case Form::Exponential: break;
  }
  return y_p + c1_scaled * std::exp(r1 * (t - horizon)) + c2 * std::exp(r2 * t);
}

double NashSolution::manager_rate(double t) const {
  switch (form) {
    case Form::Linear: return demand / horizon;
    case Form::TraderAbsent: return no_trader.rate(t);
    case Form::Exponential: break;
  }
  return r1 * c1_scaled * std::exp(r1 * (t - horizon)) + r2 * c2 * std::exp(r2 * t);
}

double NashSolution::manager_acceleration(double t) const {
  switch (form) {
    case Form::Linear: return 0.0;
    case Form::TraderAbsent: return no_trader.acceleration(t);
    case Form::Exponential: break;
  }
  return r1 * r1 * c1_scaled * std::exp(r1 * (t - horizon)) + r2 * r2 * c2 * std::exp(r2 * t);
}

double NashSolution::trader_shares(double t) const {
  switch (form) {
    case Form::Linear: return trader_terminal * t / horizon;
    case Form::TraderAbsent: return 0.0;
    case Form::Exponential: break;
  }
  const double a1 = mode_weight(gamma, eta, r1);
  const double a2 = mode_weight(gamma, eta, r2);
  return -a1 * (c1_scaled * std::exp(r1 * (t - horizon)) - c1) - a2 * c2 * std::expm1(r2 * t) -
         gamma / (2.0 * eta) * y_p * t + k1 * t;
}

double NashSolution::trader_rate(double t) const {
  switch (form) {
    case Form::Linear: return trader_terminal / horizon;
    case Form::TraderAbsent: return 0.0;
    case Form::Exponential: break;
  }
  return -0.5 * manager_rate(t) - gamma / (2.0 * eta) * manager_shares(t) + k1;
}

NashSolution solve_nash(const ImpactParams& p, const ScenarioParams& s, LambdaScaling scaling,
                        K1Method method) {
  NashSolution sol;
  sol.demand = s.demand;
  sol.trader_terminal = s.trader_terminal;
  sol.horizon = s.horizon;
  sol.gamma = p.gamma;
  sol.eta = p.eta;
  sol.lambda_eff = effective_lambda(p, s, scaling);

  const double d = s.demand;
  const double tn = s.horizon;

  if (s.trader_terminal == 0.0) {
    sol.form = NashSolution::Form::TraderAbsent;
    sol.no_trader = solve_no_trader(p, s, scaling);
    return sol;
  }
  if (p.gamma == 0.0 && sol.lambda_eff == 0.0) {
    sol.form = NashSolution::Form::Linear;
    sol.k1 = s.trader_terminal / tn + 0.5 * d / tn;
    return sol;
  }

  const double g = p.gamma;
  const double eta = p.eta;
  const double alpha = g * g / (2.0 * eta) + 2.0 * sol.lambda_eff / (d * d);
  const double disc = std::sqrt(4.0 * g * g + 12.0 * eta * sol.lambda_eff / (d * d));
  sol.r1 = (g + disc) / (3.0 * eta);
  sol.r2 = (g - disc) / (3.0 * eta);
  if (tn * std::abs(sol.r1 - sol.r2) < 1e-12) throw SolverError("nash: characteristic roots coincide");
  if (sol.r1 * tn > 700.0) {
    throw SolverError("nash: r1 t_N = " + std::to_string(sol.r1 * tn) + " overflows; rescale lambda");
  }
  sol.b_end = std::exp(sol.r1 * tn);
  sol.c_end = std::exp(sol.r2 * tn);
  const double inv_b = std::exp(-sol.r1 * tn);
  const double c = sol.c_end;
  const double c_over_b = std::exp((sol.r2 - sol.r1) * tn);
  const double a1 = mode_weight(g, eta, sol.r1);
  const double a2 = mode_weight(g, eta, sol.r2);
  const double yp_per_k1 = g / alpha;

  auto x_end = [&](double k1) {
    const Amplitudes amp = amplitudes(d, yp_per_k1 * k1, inv_b, c, c_over_b);
    return -a1 * (amp.c1_scaled - amp.c1) - a2 * amp.c2 * std::expm1(sol.r2 * tn) -
           g / (2.0 * eta) * yp_per_k1 * k1 * tn + k1 * tn;
  };

  if (method == K1Method::Affine) {
    // x(t_N) = slope * K1 + intercept; both pieces come from the unit responses of C1, C2.
    const double one_minus_inv_b = -std::expm1(-sol.r1 * tn);
    const double denom = 1.0 - c_over_b;
    const double c1_1_b = yp_per_k1 * (c - 1.0) * one_minus_inv_b / denom;  // c1_1 (B - 1)
    const double c1_0_b = d * one_minus_inv_b / denom;                      // c1_0 (B - 1)
    const double c2_1_c = -c1_1_b;                                           // c2_1 (C - 1)
    const double c2_0_c = -d * (c - 1.0) * inv_b / denom;                   // c2_0 (C - 1)
    const double slope = -a1 * c1_1_b - a2 * c2_1_c - g / (2.0 * eta) * yp_per_k1 * tn + tn;
    const double intercept = -a1 * c1_0_b - a2 * c2_0_c;
    if (slope == 0.0 || !std::isfinite(slope)) throw SolverError("nash: K1 equation is singular");
    sol.k1 = (s.trader_terminal - intercept) / slope;
  } else {
    double lo = -10.0 * d / tn;
    double hi = 10.0 * d / tn;
    double flo = x_end(lo) - s.trader_terminal;
    const double fhi = x_end(hi) - s.trader_terminal;
    if (flo * fhi > 0.0) throw SolverError("nash: K1 not bracketed by [-10 D/t_N, 10 D/t_N]");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = x_end(mid) - s.trader_terminal;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    sol.k1 = 0.5 * (lo + hi);
  }

  sol.y_p = yp_per_k1 * sol.k1;
  const Amplitudes amp = amplitudes(d, sol.y_p, inv_b, c, c_over_b);
  sol.c1 = amp.c1;
  sol.c1_scaled = amp.c1_scaled;
  sol.c2 = amp.c2;

  const double miss = std::abs(sol.trader_shares(tn) - s.trader_terminal);
  if (!(miss <= 1e-8 * std::max(1.0, d))) {
    throw SolverError("nash: x(t_N) misses T by " + std::to_string(miss));
  }
  return sol;
}

InventoryPath nash_x_path(const NashSolution& sol, std::size_t grid_points) {
  const auto grid = numerics::uniform_grid(sol.horizon, grid_points);
  return InventoryPath::sample(
      grid, [&](double t) { return sol.trader_shares(t); }, [&](double t) { return sol.trader_rate(t); },
      sol.trader_terminal);
}

InventoryPath nash_y_path(const NashSolution& sol, std::size_t grid_points) {
  const auto grid = numerics::uniform_grid(sol.horizon, grid_points);
  return InventoryPath::sample(
      grid, [&](double t) { return sol.manager_shares(t); }, [&](double t) { return sol.manager_rate(t); },
      sol.demand);
}

PlayerCosts nash_costs_closed_form(const ImpactParams& p, const NashSolution& sol) {
  const PathPolys pp = path_polys(sol);
  const ExpPoly xd = pp.x.derivative();
  const ExpPoly yd = pp.y.derivative();
  ExpPoly price(sol.horizon);
  price.add_term(p.s0 + p.epsilon, 0, 0.0);
  price = price + (pp.x + pp.y) * p.gamma + (xd + yd) * p.eta;
  PlayerCosts out;
  out.manager = (price * yd).integral();
  out.trader = (price * xd).integral();
  return out;
}

EvaluationReport evaluate_nash(const ImpactParams& p, const ScenarioParams& s, const NashSolution& sol,
                               const Conventions& conv) {
  const auto grid = evaluation_grid(p, s, conv);
  const InventoryPath x = InventoryPath::sample(
      grid, [&](double t) { return sol.trader_shares(t); }, [&](double t) { return sol.trader_rate(t); },
      sol.trader_terminal);
  const InventoryPath y = InventoryPath::sample(
      grid, [&](double t) { return sol.manager_shares(t); }, [&](double t) { return sol.manager_rate(t); },
      sol.demand);
  return evaluate_paths(p, s, x, y, conv);
}

}  // namespace recon
