#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "recon/conventions.hpp"
#include "recon/market_model.hpp"
#include "recon/path.hpp"

namespace recon::oracle {

// Everything here works from sampled paths only. Nothing reads solver
// coefficients, so a wrong closed form cannot verify itself.

enum class CostRole { Manager, Trader };

struct QuadratureCost {
  double value = 0.0;
  /// Richardson-extrapolated Simpson, when the grid has (n - 1) divisible by 4.
  std::optional<double> richardson;
};

/// Simpson quadrature of the role's cost integrand. Rates are analytic when the
/// paths carry them and finite differences otherwise. Throws DomainError unless
/// the paths share an odd-sized grid.
QuadratureCost quadrature_cost(const ImpactParams& p, CostRole role, const InventoryPath& x,
                               const InventoryPath& y);

enum class ElRegime {
  Trader,              ///< x'' + y''/2 + (gamma / 2 eta) y' = 0
  Manager,             ///< y'' + x''/2 + (gamma / 2 eta) x' - lambda_eff / (eta D^2) y = 0
  NoTrader,            ///< y'' - 2 lambda_eff / (eta D^2) y = 0
  StackelbergFollower  ///< y'' + (C / 2 eta tau)(gamma - eta / tau) e^{-t/tau} - lambda_eff / (eta D^2) y = 0
};

/// Residuals in shares/day^2 at interior nodes.
struct ResidualProfile {
  std::vector<double> residual;  ///< central differences, step h
  double sup = 0.0;
  double l2 = 0.0;
  /// sup of (4 R_h - R_2h) / 3, the O(h^2) error removed; nodes shared by both stencils.
  double extrapolated_sup = 0.0;
};

/// Throws DomainError when the grid has fewer than 5 points or is not uniform.
ResidualProfile el_residual(const ImpactParams& p, const ScenarioParams& s, ElRegime regime,
                            double lambda_eff, const InventoryPath& x, const InventoryPath& y);

/// Minimises the role's discretised objective over interior nodes with both
/// endpoints pinned, holding `fixed` at its samples. `penalty` is the weight on
/// (y / D)^2 in the manager objective (lambda_eff, or 2 lambda_eff for the
/// no-trader normalisation). Throws IndefiniteSystemError when the stationarity
/// system has a non-positive pivot.
InventoryPath discrete_best_response(const ImpactParams& p, const ScenarioParams& s,
                                     const InventoryPath& fixed, CostRole role, double penalty);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct Tolerances {
  double cost_rel = 1e-6;
  double el_scale = 1e-4;  ///< times D / t_N^2
  double bc_scale = 1e-8;  ///< times max(1, D)
  double br_scale = 1e-3;  ///< times D
};

struct VerificationReport {
  double cost_rel_err = 0.0;
  double trader_cost_rel_err = 0.0;
  double el_residual_norm = 0.0;
  std::array<double, 4> bc_errors{};  ///< x(0), x(t_N) - T, y(0), y(t_N) - D
  double br_deviation = 0.0;
  bool quadrature_fallback = false;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

/// Solves the regime, then runs the cost, EL, boundary and best-response checks.
/// Linear is verified for cost and boundaries only (it is not an optimum).
VerificationReport verify_scenario(const ImpactParams& p, const ScenarioParams& s, Regime regime,
                                   const Conventions& conv = {}, const Tolerances& tol = {});

}  // namespace recon::oracle
