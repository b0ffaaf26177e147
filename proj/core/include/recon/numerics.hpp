#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace recon::numerics {

/// `points` equally spaced nodes on [0, t_end], endpoints exact.
std::vector<double> uniform_grid(double t_end, std::size_t points);

/// True when consecutive spacings agree to 1e-9 relative.
bool is_uniform(std::span<const double> times);

/// Composite Simpson on equally spaced samples. Requires an odd count >= 3.
double simpson(std::span<const double> values, double step);

struct SimpsonEstimate {
  double fine = 0.0;
  /// Simpson on every other node; present when (n - 1) is divisible by 4.
  std::optional<double> coarse;
  /// fine + (fine - coarse) / 15.
  std::optional<double> richardson;
};

SimpsonEstimate simpson_richardson(std::span<const double> values, double step);

/// Second-order central differences inside, second-order one-sided stencils at both ends.
std::vector<double> first_derivative(std::span<const double> f, double step);

/// Thomas algorithm for a symmetric positive definite tridiagonal system.
/// `lower[i]` couples rows i and i+1 (size n-1). Throws IndefiniteSystemError
/// as soon as a non-positive pivot appears.
std::vector<double> solve_spd_tridiagonal(std::span<const double> diag,
                                          std::span<const double> lower,
                                          std::span<const double> rhs);

/// (exp(a t) - 1) / a, continuous through a = 0.
double expm1_ratio(double a, double t);

}  // namespace recon::numerics
