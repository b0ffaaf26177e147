#include <cmath>

#include "recon/errors.hpp"
#include "recon/numerics.hpp"
#include "recon/runner.hpp"

namespace recon {

std::vector<PricePathRecord> emit_price_path(const ImpactParams& p, const InventoryPath& x,
                                             const InventoryPath& y) {
  if (!x.same_grid(y)) throw DomainError("emit_price_path: paths are on different grids");
  const auto xd = x.rates();
  const auto yd = y.rates();
  std::vector<PricePathRecord> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& r = out[i];
    r.time = x.times()[i];
    r.mid = p.s0 + p.gamma * (x.shares()[i] + y.shares()[i]);
    r.execution = r.mid + p.eta * (xd[i] + yd[i]) + p.epsilon;
    r.cum_return = r.mid / p.s0 - 1.0;
  }
  return out;
}

PriceDecomposition decompose_price_path(const ImpactParams& p, const InventoryPath& x,
                                        const InventoryPath& y) {
  if (!x.same_grid(y)) throw DomainError("decompose_price_path: paths are on different grids");
  const std::size_t last = x.size() - 1;
  const auto xd = x.rates();
  const auto yd = y.rates();
  PriceDecomposition d;
  d.permanent = p.gamma * (x.shares()[last] + y.shares()[last]) / p.s0;
  d.temporary = p.eta * (xd[last] + yd[last]) / p.s0;
  d.spread = p.epsilon / p.s0;
  d.cum_return = d.permanent;
  return d;
}

PricePathScenario price_path_scenario(const ImpactParams& p, const ScenarioParams& s,
                                      std::size_t grid_points) {
  const auto grid = numerics::uniform_grid(s.horizon, grid_points);
  const double t_end = s.trader_terminal;
  const double tn = s.horizon;
  PricePathScenario out{
      InventoryPath::sample(
          grid, [&](double t) { return t_end * t / tn; }, [&](double) { return t_end / tn; }, t_end),
      InventoryPath::flat_zero(grid),
      {},
      {}};
  out.records = emit_price_path(p, out.trader, out.manager);
  out.decomposition = decompose_price_path(p, out.trader, out.manager);
  return out;
}

std::string price_path_csv(const std::vector<PricePathRecord>& records) {
  std::string out = "time,mid,execution,cum_return\n";
  for (const auto& r : records) {
    out += format_number(r.time) + ',' + format_number(r.mid) + ',' + format_number(r.execution) + ',' +
           format_number(r.cum_return) + '\n';
  }
  return out;
}

}  // namespace recon
