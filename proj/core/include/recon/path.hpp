#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace recon {

/// Cumulative holdings sampled on a uniform grid over [0, t_N].
///
/// Carries the analytic trading rate when the generating formula supplies
/// one; otherwise rates are recovered by finite differences. Holdings may
/// exceed the terminal value mid-path.
class InventoryPath {
 public:
  InventoryPath(std::vector<double> times, std::vector<double> shares, double terminal,
                std::vector<double> rates = {});

  template <class Position, class Rate>
  static InventoryPath sample(std::span<const double> grid, Position&& position, Rate&& rate,
                              double terminal) {
    std::vector<double> x(grid.size());
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      x[i] = position(grid[i]);
      v[i] = rate(grid[i]);
    }
    return InventoryPath({grid.begin(), grid.end()}, std::move(x), terminal, std::move(v));
  }

  /// Holds nothing for the whole horizon.
  static InventoryPath flat_zero(std::span<const double> grid);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& shares() const noexcept { return shares_; }
  const std::vector<double>& analytic_rates() const noexcept { return rates_; }
  bool has_analytic_rates() const noexcept { return !rates_.empty(); }

  double terminal() const noexcept { return terminal_; }
  double horizon() const noexcept { return times_.back(); }
  double final_shares() const noexcept { return shares_.back(); }
  std::size_t size() const noexcept { return times_.size(); }
  double step() const noexcept { return times_[1] - times_[0]; }

  /// Analytic rates when present, finite differences otherwise.
  std::vector<double> rates() const;

  /// Same grid (to 1e-12 of the horizon).
  bool same_grid(const InventoryPath& other) const;

 private:
  std::vector<double> times_;
  std::vector<double> shares_;
  std::vector<double> rates_;
  double terminal_;
};

}  // namespace recon
