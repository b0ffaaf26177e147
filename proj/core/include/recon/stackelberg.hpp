#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "recon/conventions.hpp"
#include "recon/market_model.hpp"
#include "recon/path.hpp"

namespace recon {

/// Leader plan x(t) = C (1 - e^{-t/tau}), C = T / (1 - e^{-t_N/tau}).
struct StackelbergLeader {
  double c_scale = 0.0;
  double tau = 1.0;
  double horizon = 0.0;
  double terminal = 0.0;

  double shares(double t) const;
  double rate(double t) const;
};

StackelbergLeader make_stackelberg_leader(const ScenarioParams& s);
InventoryPath stackelberg_x_path(const ScenarioParams& s, std::size_t grid_points);

/// Follower best response to the leader plan:
///   2 eta y'' - (2 lambda / D^2) y = -(C / tau)(gamma - eta / tau) e^{-t/tau}.
struct StackelbergSolution {
  enum class Branch {
    Regular,   ///< y = C1 e^{kt} + C2 e^{-kt} + K e^{-t/tau}
    Resonant,  ///< k = 1/tau: the forcing term gets a t e^{-t/tau} particular part
    NoPenalty  ///< k t_N < 1e-4: y = K (e^{-t/tau} - 1) + b t
  };

  Branch branch = Branch::Regular;
  double k = 0.0;
  double c_scale = 0.0;
  double big_k = 0.0;   ///< K (Regular, NoPenalty) or M (Resonant)
  double c1 = 0.0;
  double c1_scaled = 0.0;  ///< C1 e^{k t_N}
  double c2 = 0.0;
  double slope = 0.0;   ///< b (NoPenalty)
  double a_end = 1.0;   ///< e^{k t_N}
  double b_end = 1.0;   ///< e^{-k t_N}
  double e_end = 1.0;   ///< e^{-t_N/tau}

  double demand = 0.0;
  double trader_terminal = 0.0;
  double horizon = 0.0;
  double tau = 1.0;
  double lambda_eff = 0.0;
  StackelbergLeader leader{};

  double manager_shares(double t) const;
  double manager_rate(double t) const;
  double manager_acceleration(double t) const;
};

/// Throws SolverError when k t_N > 700.
StackelbergSolution solve_stackelberg(const ImpactParams& p, const ScenarioParams& s,
                                      LambdaScaling scaling = LambdaScaling::BenchmarkCost);

InventoryPath stackelberg_y_path(const StackelbergSolution& sol, std::size_t grid_points);

/// Result of a term-by-term closed-form cost expansion.
struct ClosedFormCost {
  double value = 0.0;
  /// Set when no closed form applies (resonant branch) and `value` is Simpson quadrature.
  bool quadrature_fallback = false;
  std::vector<double> printed_terms;  ///< expansion as published
  std::vector<double> terms;          ///< terms actually summed
  std::vector<std::string> diagnostics;
};

/// Manager cost as the six-term appendix expansion. Each printed term is gated
/// against Simpson quadrature of its own integrand; a term that disagrees is
/// replaced by its corrected analytic form and a diagnostic is recorded.
ClosedFormCost manager_cost_closed_form(const ImpactParams& p, const StackelbergSolution& sol);

/// Trader cost from the four-coefficient appendix expansion evaluated at t_N.
ClosedFormCost trader_cost_closed_form(const ImpactParams& p, const StackelbergSolution& sol);

EvaluationReport evaluate_stackelberg(const ImpactParams& p, const ScenarioParams& s,
                                      const StackelbergSolution& sol, const Conventions& conv);

std::string_view to_string(StackelbergSolution::Branch b);

}  // namespace recon
