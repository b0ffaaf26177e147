#include "recon/numerics.hpp"

#include <cmath>
#include <string>

#include "recon/errors.hpp"

namespace recon::numerics {

std::vector<double> uniform_grid(double t_end, std::size_t points) {
  if (points < 2) throw DomainError("uniform_grid: need at least 2 points");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("uniform_grid: horizon must be positive");
  std::vector<double> t(points);
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) t[i] = t_end * (static_cast<double>(i) / n);
  t.back() = t_end;
  return t;
}

bool is_uniform(std::span<const double> times) {
  if (times.size() < 2) return false;
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * std::abs(h)) return false;
  }
  return true;
}

double simpson(std::span<const double> values, double step) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0) {
    throw DomainError("simpson: need an odd number of samples >= 3, got " + std::to_string(n));
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += values[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += values[i];
  return step / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

SimpsonEstimate simpson_richardson(std::span<const double> values, double step) {
  SimpsonEstimate out;
  out.fine = simpson(values, step);
  const std::size_t n = values.size();
  if (n >= 5 && (n - 1) % 4 == 0) {
    std::vector<double> half;
    half.reserve(n / 2 + 1);
    for (std::size_t i = 0; i < n; i += 2) half.push_back(values[i]);
    out.coarse = simpson(half, 2.0 * step);
    out.richardson = out.fine + (out.fine - *out.coarse) / 15.0;
  }
  return out;
}

std::vector<double> first_derivative(std::span<const double> f, double step) {
  const std::size_t n = f.size();
  if (n < 3) throw DomainError("first_derivative: need at least 3 samples");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * step);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * step);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * step);
  return d;
}

std::vector<double> solve_spd_tridiagonal(std::span<const double> diag,
                                          std::span<const double> lower,
                                          std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || rhs.size() != n || lower.size() + 1 != n) {
    throw DomainError("solve_spd_tridiagonal: inconsistent sizes");
  }
  std::vector<double> c(n, 0.0);
  std::vector<double> d(n, 0.0);
  double pivot = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = diag[i] - lower[i - 1] * c[i - 1];
    if (!(pivot > 0.0)) {
      const int sign = pivot < 0.0 ? -1 : 0;
      throw IndefiniteSystemError("stationarity system is not positive definite at row " +
                                      std::to_string(i),
                                  sign, i);
    }
    if (i + 1 < n) c[i] = lower[i] / pivot;
    d[i] = (rhs[i] - (i > 0 ? lower[i - 1] * d[i - 1] : 0.0)) / pivot;
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

double expm1_ratio(double a, double t) {
  const double z = a * t;
  if (std::abs(z) < 1e-8) return t * (1.0 + 0.5 * z);
  return std::expm1(z) / a;
}

}  // namespace recon::numerics
