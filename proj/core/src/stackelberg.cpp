#include "recon/stackelberg.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "recon/errors.hpp"
#include "recon/evaluation.hpp"
#include "recon/exp_poly.hpp"
#include "recon/numerics.hpp"

namespace recon {

namespace {

using numerics::ExpPoly;
using numerics::expm1_ratio;

using Branch = StackelbergSolution::Branch;

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Exponential-polynomial forms of x and y for the branches with exact integrals.
struct PathPolys {
  ExpPoly x;
  ExpPoly y;
};

PathPolys path_polys(const StackelbergSolution& sol) {
  const double tn = sol.horizon;
  const double inv_tau = 1.0 / sol.tau;
  PathPolys pp{ExpPoly(tn), ExpPoly(tn)};
  pp.x.add_term(sol.c_scale, 0, 0.0).add_term(-sol.c_scale, 0, -inv_tau);
  switch (sol.branch) {
    case Branch::Regular:
      pp.y.add_shifted(sol.c1_scaled, 0, sol.k, tn);
      pp.y.add_term(sol.c2, 0, -sol.k);
      pp.y.add_term(sol.big_k, 0, -inv_tau);
      break;
    case Branch::Resonant:
      pp.y.add_shifted(sol.c1_scaled, 0, sol.k, tn);
      pp.y.add_term(sol.c2, 0, -sol.k);
      pp.y.add_term(sol.big_k, 1, -inv_tau);
      break;
    case Branch::NoPenalty:
      pp.y.add_term(sol.big_k, 0, -inv_tau);
      pp.y.add_term(-sol.big_k, 0, 0.0);
      pp.y.add_term(sol.slope, 1, 0.0);
      break;
  }
  return pp;
}

std::vector<double> sample(const std::vector<double>& grid, double (StackelbergSolution::*f)(double) const,
                           const StackelbergSolution& sol) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = (sol.*f)(grid[i]);
  return v;
}

struct Sampled {
  std::vector<double> x, xd, y, yd;
  double h;
};

Sampled sample_all(const StackelbergSolution& sol) {
  const auto grid = numerics::uniform_grid(sol.horizon, default_grid_points(sol.horizon));
  Sampled s;
  s.h = grid[1] - grid[0];
  s.x.resize(grid.size());
  s.xd.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s.x[i] = sol.leader.shares(grid[i]);
    s.xd[i] = sol.leader.rate(grid[i]);
  }
  s.y = sample(grid, &StackelbergSolution::manager_shares, sol);
  s.yd = sample(grid, &StackelbergSolution::manager_rate, sol);
  return s;
}

template <class F>
double simpson_of(const Sampled& s, F&& integrand) {
  std::vector<double> f(s.y.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = integrand(s.x[i], s.xd[i], s.y[i], s.yd[i]);
  return numerics::simpson(f, s.h);
}

}  // namespace

double StackelbergLeader::shares(double t) const { return c_scale * -std::expm1(-t / tau); }

double StackelbergLeader::rate(double t) const { return c_scale / tau * std::exp(-t / tau); }

StackelbergLeader make_stackelberg_leader(const ScenarioParams& s) {
  if (!(s.tau > 0.0)) throw DomainError("stackelberg: tau must be positive");
  StackelbergLeader l;
  l.tau = s.tau;
  l.horizon = s.horizon;
  l.terminal = s.trader_terminal;
  l.c_scale = s.trader_terminal / -std::expm1(-s.horizon / s.tau);
  return l;
}

InventoryPath stackelberg_x_path(const ScenarioParams& s, std::size_t grid_points) {
  const StackelbergLeader l = make_stackelberg_leader(s);
  const auto grid = numerics::uniform_grid(s.horizon, grid_points);
  InventoryPath path = InventoryPath::sample(
      grid, [&](double t) { return l.shares(t); }, [&](double t) { return l.rate(t); }, l.terminal);
  return path;
}

double StackelbergSolution::manager_shares(double t) const {
  const double decay = std::exp(-t / tau);
  switch (branch) {
    case Branch::NoPenalty:
      return big_k * (decay - 1.0) + slope * t;
    case Branch::Resonant:
      return c1_scaled * std::exp(k * (t - horizon)) + c2 * std::exp(-k * t) + big_k * t * decay;
    case Branch::Regular:
      break;
  }
  return c1_scaled * std::exp(k * (t - horizon)) + c2 * std::exp(-k * t) + big_k * decay;
}

double StackelbergSolution::manager_rate(double t) const {
  const double decay = std::exp(-t / tau);
  switch (branch) {
    case Branch::NoPenalty:
      return -big_k / tau * decay + slope;
    case Branch::Resonant:
      return k * c1_scaled * std::exp(k * (t - horizon)) - k * c2 * std::exp(-k * t) +
             big_k * (1.0 - t / tau) * decay;
    case Branch::Regular:
      break;
  }
  return k * c1_scaled * std::exp(k * (t - horizon)) - k * c2 * std::exp(-k * t) - big_k / tau * decay;
}

double StackelbergSolution::manager_acceleration(double t) const {
  const double decay = std::exp(-t / tau);
  switch (branch) {
    case Branch::NoPenalty:
      return big_k / (tau * tau) * decay;
    case Branch::Resonant:
      return k * k * (c1_scaled * std::exp(k * (t - horizon)) + c2 * std::exp(-k * t)) +
             big_k * (t / (tau * tau) - 2.0 / tau) * decay;
    case Branch::Regular:
      break;
  }
  return k * k * (c1_scaled * std::exp(k * (t - horizon)) + c2 * std::exp(-k * t)) +
         big_k / (tau * tau) * decay;
}

StackelbergSolution solve_stackelberg(const ImpactParams& p, const ScenarioParams& s, LambdaScaling scaling) {
  StackelbergSolution sol;
  sol.leader = make_stackelberg_leader(s);
  sol.demand = s.demand;
  sol.trader_terminal = s.trader_terminal;
  sol.horizon = s.horizon;
  sol.tau = s.tau;
  sol.lambda_eff = effective_lambda(p, s, scaling);
  sol.c_scale = sol.leader.c_scale;

  const double d = s.demand;
  const double tn = s.horizon;
  const double tau = s.tau;
  const double eta = p.eta;
  sol.k = std::sqrt(sol.lambda_eff / (eta * d * d));
  if (sol.k * tn > 700.0) {
    throw SolverError("stackelberg: k t_N = " + std::to_string(sol.k * tn) + " overflows; rescale lambda");
  }
  sol.e_end = std::exp(-tn / tau);
  sol.b_end = std::exp(-sol.k * tn);
  sol.a_end = std::exp(sol.k * tn);

  const double c = sol.c_scale;
  const double forcing = c / tau * (p.gamma - eta / tau);  // F
  const double lead = 2.0 * eta / (tau * tau);
  const double denom = lead - 2.0 * sol.lambda_eff / (d * d);
  const double e = sol.e_end;
  const double b = sol.b_end;
  const double one_minus_b2 = -std::expm1(-2.0 * sol.k * tn);

  if (sol.k * tn < 1e-4) {
    sol.branch = Branch::NoPenalty;
    sol.big_k = -forcing * tau * tau / (2.0 * eta);
    sol.slope = (d - sol.big_k * (e - 1.0)) / tn;
    return sol;
  }
  if (std::abs(denom) < 1e-12 * lead) {
    sol.branch = Branch::Resonant;
    sol.big_k = forcing * tau / (4.0 * eta);
    sol.c1_scaled = (d - sol.big_k * tn * e) / one_minus_b2;
    sol.c1 = sol.c1_scaled * b;
    sol.c2 = -sol.c1;
    return sol;
  }
  sol.branch = Branch::Regular;
  sol.big_k = (eta * c / (tau * tau) - p.gamma * c / tau) / denom;
  sol.c1_scaled = (d - sol.big_k * (e - b)) / one_minus_b2;
  sol.c1 = sol.c1_scaled * b;
  // C2 = (-D - K (A - E)) / (A - B), multiplied through by B
  sol.c2 = (-d * b - sol.big_k * (1.0 - e * b)) / one_minus_b2;
  return sol;
}

InventoryPath stackelberg_y_path(const StackelbergSolution& sol, std::size_t grid_points) {
  const auto grid = numerics::uniform_grid(sol.horizon, grid_points);
  return InventoryPath::sample(
      grid, [&](double t) { return sol.manager_shares(t); }, [&](double t) { return sol.manager_rate(t); },
      sol.demand);
}

ClosedFormCost manager_cost_closed_form(const ImpactParams& p, const StackelbergSolution& sol) {
  ClosedFormCost out;
  const Sampled smp = sample_all(sol);

  if (sol.branch == Branch::Resonant) {
    out.quadrature_fallback = true;
    out.value = simpson_of(smp, [&](double x, double xd, double y, double yd) {
      return (p.s0 + p.epsilon + p.gamma * (x + y) + p.eta * (xd + yd)) * yd;
    });
    out.terms = {out.value};
    out.diagnostics.push_back("resonant branch (k = 1/tau): cost from Simpson quadrature");
    return out;
  }
  if (sol.branch == Branch::NoPenalty) {
    const PathPolys pp = path_polys(sol);
    const ExpPoly xd = pp.x.derivative();
    const ExpPoly yd = pp.y.derivative();
    const double t1 = p.s0 * sol.demand;
    const double t2 = p.gamma * (pp.x * yd).integral();
    const double t3 = 0.5 * p.gamma * sol.demand * sol.demand;
    const double t4 = p.eta * (xd * yd).integral();
    const double t5 = p.eta * (yd * yd).integral();
    const double t6 = p.epsilon * sol.demand;
    out.terms = {t1, t2, t3, t4, t5, t6};
    out.value = t1 + t2 + t3 + t4 + t5 + t6;
    out.diagnostics.push_back("k t_N below 1e-4: linear homogeneous part, terms integrated exactly");
    return out;
  }

  const double k = sol.k;
  const double tau = sol.tau;
  const double tn = sol.horizon;
  const double inv_tau = 1.0 / tau;
  const double c = sol.c_scale;
  const double big_k = sol.big_k;
  const double c1 = sol.c1;
  const double c1a = sol.c1_scaled;  // C1 A
  const double c2 = sol.c2;
  const double e = sol.e_end;
  const double one_minus_e = -std::expm1(-tn * inv_tau);
  const double one_minus_e2 = -std::expm1(-2.0 * tn * inv_tau);
  const double one_minus_b = -std::expm1(-k * tn);
  const double one_minus_b2 = -std::expm1(-2.0 * k * tn);
  const double rho_m = expm1_ratio(k - inv_tau, tn);     // (e^{(k-1/tau) t_N} - 1) / (k - 1/tau)
  const double rho_p = expm1_ratio(-(k + inv_tau), tn);  // (1 - e^{-(k+1/tau) t_N}) / (k + 1/tau)
  const double c1_ae_minus_1 = c1a * e - c1;              // C1 (e^{(k-1/tau) t_N} - 1)
  const double c1_a2_minus_1 = c1a * c1a - c1 * c1;       // C1^2 (A^2 - 1)
  const double one_minus_ekt = -std::expm1(-(k + inv_tau) * tn);
  const double g = p.gamma;
  const double eta = p.eta;

  const double bracket = (c1a - c1) - c2 * one_minus_b - big_k * one_minus_e;
  const double term1 = p.s0 * bracket;
  const double term2 = g * c * (c1a - c1 - c1 * k * rho_m) -
                            g * c * c2 * k * (one_minus_b / k - rho_p) -
                            g * c * big_k * (one_minus_e - 0.5 * one_minus_e2);
  const double term3_printed = 0.5 * g * c1_a2_minus_1 - 0.5 * g * c2 * c2 * one_minus_b2 -
                               0.5 * g * big_k * big_k * one_minus_e2 -
                               g * c1 * big_k * (k / tau) * rho_m - g * c2 * big_k * (k / tau) * rho_p;
  const double term3_fixed = 0.5 * g * c1_a2_minus_1 - 0.5 * g * c2 * c2 * one_minus_b2 -
                             0.5 * g * big_k * big_k * one_minus_e2 + g * big_k * c1_ae_minus_1 -
                             g * c2 * big_k * one_minus_ekt;
  auto term4_with = [&](double a) {
    return eta * a * c1 * k * rho_m - eta * a * c2 * k * rho_p - 0.5 * eta * a * big_k * one_minus_e2;
  };
  const double term4_printed = term4_with(c);
  const double term4_fixed = term4_with(c / tau);
  const double term5 = 0.5 * eta * k * c1_a2_minus_1 + 0.5 * eta * c2 * c2 * k * one_minus_b2 +
                       0.5 * eta * big_k * big_k / tau * one_minus_e2 - 2.0 * eta * c1 * c2 * k * k * tn -
                       2.0 * eta * c1 * k * big_k / tau * rho_m + 2.0 * eta * c2 * k * big_k / tau * rho_p;
  const double term6 = p.epsilon * bracket;

  out.printed_terms = {term1, term2, term3_printed, term4_printed, term5, term6};
  const std::vector<double> fixed = {term1, term2, term3_fixed, term4_fixed, term5, term6};

  const std::vector<double> quad = {
      simpson_of(smp, [&](double, double, double, double yd) { return p.s0 * yd; }),
      simpson_of(smp, [&](double x, double, double, double yd) { return g * x * yd; }),
      simpson_of(smp, [&](double, double, double y, double yd) { return g * y * yd; }),
      simpson_of(smp, [&](double, double xd, double, double yd) { return eta * xd * yd; }),
      simpson_of(smp, [&](double, double, double, double yd) { return eta * yd * yd; }),
      simpson_of(smp, [&](double, double, double, double yd) { return p.epsilon * yd; }),
  };
  double quad_total = 0.0;
  for (double q : quad) quad_total += q;
  const double gate = 1e-7 * std::abs(quad_total);

  out.terms.resize(6);
  out.value = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    const double printed = out.printed_terms[i];
    out.terms[i] = printed;
    if (std::abs(printed - quad[i]) > gate) {
      const bool same = std::abs(fixed[i] - printed) <= 1e-12 * std::max(1.0, std::abs(printed));
      if (same) {
        out.diagnostics.push_back("term " + std::to_string(i + 1) +
                                  fmt(": printed %.10g vs quadrature %.10g; grid resolution, kept", printed,
                                      quad[i]));
      } else {
        out.terms[i] = fixed[i];
        out.diagnostics.push_back("term " + std::to_string(i + 1) +
                                  fmt(": printed %.10g disagrees with quadrature %.10g; corrected form used",
                                      printed, quad[i]));
      }
    }
    out.value += out.terms[i];
  }
  return out;
}

ClosedFormCost trader_cost_closed_form(const ImpactParams& p, const StackelbergSolution& sol) {
  ClosedFormCost out;
  if (sol.trader_terminal == 0.0) return out;
  const Sampled smp = sample_all(sol);
  const double quad = simpson_of(smp, [&](double x, double xd, double y, double yd) {
    return (p.s0 + p.epsilon + p.gamma * (x + y) + p.eta * (xd + yd)) * xd;
  });
  if (sol.branch == Branch::Resonant) {
    out.quadrature_fallback = true;
    out.value = quad;
    out.terms = {quad};
    out.diagnostics.push_back("resonant branch (k = 1/tau): cost from Simpson quadrature");
    return out;
  }
  if (sol.branch == Branch::NoPenalty) {
    const PathPolys pp = path_polys(sol);
    ExpPoly price(sol.horizon);
    price.add_term(p.s0 + p.epsilon, 0, 0.0);
    const ExpPoly xd = pp.x.derivative();
    price = price + (pp.x + pp.y) * p.gamma + (xd + pp.y.derivative()) * p.eta;
    out.value = (price * xd).integral();
    out.terms = {out.value};
    return out;
  }

  const double tau = sol.tau;
  const double tn = sol.horizon;
  const double k = sol.k;
  const double c = sol.c_scale;
  const double cx = c / tau;
  const double a0 = p.s0 + p.gamma * c + p.epsilon;
  const double a1 = (p.gamma + p.eta * k) * sol.c1;
  const double a2 = (p.gamma - p.eta * k) * sol.c2;
  const double a3 = (sol.big_k - c) * (p.gamma - p.eta / tau);
  const double t0 = a0 * cx * tau * -std::expm1(-tn / tau);
  const double t1 = a1 * cx * expm1_ratio(k - 1.0 / tau, tn);
  const double t2 = a2 * cx * expm1_ratio(-(k + 1.0 / tau), tn);
  const double t3 = a3 * cx * 0.5 * tau * -std::expm1(-2.0 * tn / tau);
  out.printed_terms = {t0, t1, t2, t3};
  out.terms = out.printed_terms;
  out.value = t0 + t1 + t2 + t3;
  if (std::abs(out.value - quad) > 1e-6 * std::abs(quad)) {
    out.diagnostics.push_back(fmt("trader expansion %.10g vs quadrature %.10g", out.value, quad));
  }
  return out;
}

EvaluationReport evaluate_stackelberg(const ImpactParams& p, const ScenarioParams& s,
                                      const StackelbergSolution& sol, const Conventions& conv) {
  const auto grid = evaluation_grid(p, s, conv);
  const InventoryPath x = InventoryPath::sample(
      grid, [&](double t) { return sol.leader.shares(t); }, [&](double t) { return sol.leader.rate(t); },
      sol.trader_terminal);
  const InventoryPath y = InventoryPath::sample(
      grid, [&](double t) { return sol.manager_shares(t); }, [&](double t) { return sol.manager_rate(t); },
      sol.demand);
  return evaluate_paths(p, s, x, y, conv);
}

std::string_view to_string(StackelbergSolution::Branch b) {
  switch (b) {
    case Branch::Regular: return "regular";
    case Branch::Resonant: return "resonant";
    case Branch::NoPenalty: return "no_penalty";
  }
  return "?";
}

}  // namespace recon
