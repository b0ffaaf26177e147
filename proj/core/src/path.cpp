#include "recon/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recon/errors.hpp"
#include "recon/numerics.hpp"

namespace recon {

InventoryPath::InventoryPath(std::vector<double> times, std::vector<double> shares, double terminal,
                             std::vector<double> rates)
    : times_(std::move(times)), shares_(std::move(shares)), rates_(std::move(rates)), terminal_(terminal) {
  if (times_.size() < 2) throw DomainError("InventoryPath: need at least two samples");
  if (shares_.size() != times_.size()) throw DomainError("InventoryPath: times/shares size mismatch");
  if (!rates_.empty() && rates_.size() != times_.size()) {
    throw DomainError("InventoryPath: rates size mismatch");
  }
  if (times_.front() != 0.0) throw DomainError("InventoryPath: grid must start at 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw DomainError("InventoryPath: times must increase strictly");
  }
  for (double v : shares_) {
    if (!std::isfinite(v)) throw DomainError("InventoryPath: non-finite holdings");
  }
  const double tol0 = 1e-6 * std::max(1.0, std::abs(terminal_));
  if (std::abs(shares_.front()) > tol0) throw DomainError("InventoryPath: holdings must start at 0");
  if (std::abs(shares_.back() - terminal_) > tol0) {
    throw DomainError("InventoryPath: final holdings " + std::to_string(shares_.back()) +
                      " do not match terminal " + std::to_string(terminal_));
  }
}

InventoryPath InventoryPath::flat_zero(std::span<const double> grid) {
  std::vector<double> zeros(grid.size(), 0.0);
  return InventoryPath({grid.begin(), grid.end()}, zeros, 0.0, zeros);
}

std::vector<double> InventoryPath::rates() const {
  if (has_analytic_rates()) return rates_;
  if (numerics::is_uniform(times_) && times_.size() >= 3) {
    return numerics::first_derivative(shares_, step());
  }
  // non-uniform: interval slopes averaged at interior nodes
  std::vector<double> d(times_.size());
  const std::size_t n = times_.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = (shares_[i + 1] - shares_[i]) / (times_[i + 1] - times_[i]);
    if (i == 0) d[0] = s;
    if (i + 1 == n - 1) d[n - 1] = s;
    if (i > 0) d[i] = 0.5 * (d[i] + s);
    if (i + 1 < n - 1) d[i + 1] = s;
  }
  return d;
}

bool InventoryPath::same_grid(const InventoryPath& other) const {
  if (other.times_.size() != times_.size()) return false;
  const double tol = 1e-12 * std::max(1.0, horizon());
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (std::abs(times_[i] - other.times_[i]) > tol) return false;
  }
  return true;
}

}  // namespace recon
