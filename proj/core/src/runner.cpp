#include "recon/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "recon/closed_form.hpp"
#include "recon/errors.hpp"
#include "recon/evaluation.hpp"
#include "recon/nash.hpp"
#include "recon/numerics.hpp"
#include "recon/stackelberg.hpp"

namespace recon {

using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::DomainError: return "domain_error";
    case RowStatus::SolverError: return "solver_error";
  }
  return "?";
}

namespace {

template <class X, class Xd, class Y, class Yd>
void keep_paths(ResultRow& row, std::size_t points, double horizon, double t_end, double d, X&& x, Xd&& xd,
                Y&& y, Yd&& yd) {
  if (points == 0) return;
  const auto grid = numerics::uniform_grid(horizon, points);
  row.trader_path = InventoryPath::sample(grid, x, xd, t_end);
  row.manager_path = InventoryPath::sample(grid, y, yd, d);
}

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else if (ch == '\n' || ch == '\r') out += ' ';
    else out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << content;
}

}  // namespace

ResultRow evaluate_scenario(const RunConfig& c, std::size_t index, const ScenarioSpec& spec) {
  ResultRow row;
  row.index = index;
  row.regime = c.regime;
  row.scenario = spec.scenario;
  row.participation = spec.participation;
  const ImpactParams& p = c.params;
  const ScenarioParams& s = spec.scenario;
  const Conventions& conv = c.conventions;
  try {
    s.validate();
    switch (c.regime) {
      case Regime::NoTrader: {
        const NoTraderSolution sol = solve_no_trader(p, s, conv.lambda_scaling);
        ScenarioParams alone = s;
        alone.trader_terminal = 0.0;
        row.lambda_eff = effective_lambda(p, alone, conv.lambda_scaling);
        row.report = evaluate_no_trader(p, s, conv);
        keep_paths(
            row, c.path_points, s.horizon, 0.0, s.demand, [](double) { return 0.0; },
            [](double) { return 0.0; }, [&](double t) { return sol.shares(t); },
            [&](double t) { return sol.rate(t); });
        break;
      }
      case Regime::Linear: {
        const LinearScenario ls = make_linear_scenario(s);
        row.lambda_eff = effective_lambda(p, s, conv.lambda_scaling);
        row.report = evaluate_linear(p, s, conv);
        if (c.path_points > 0) {
          row.manager_path = linear_manager_path(ls, c.path_points);
          row.trader_path = InventoryPath::sample(
              row.manager_path->times(), [&](double t) { return ls.trader_shares(t); },
              [&](double t) { return ls.trader_rate(t); }, ls.trader_terminal);
        }
        break;
      }
      case Regime::Nash: {
        const NashSolution sol = solve_nash(p, s, conv.lambda_scaling);
        row.lambda_eff = sol.lambda_eff;
        row.report = evaluate_nash(p, s, sol, conv);
        keep_paths(
            row, c.path_points, s.horizon, s.trader_terminal, s.demand,
            [&](double t) { return sol.trader_shares(t); }, [&](double t) { return sol.trader_rate(t); },
            [&](double t) { return sol.manager_shares(t); }, [&](double t) { return sol.manager_rate(t); });
        break;
      }
      case Regime::Stackelberg: {
        const StackelbergSolution sol = solve_stackelberg(p, s, conv.lambda_scaling);
        row.lambda_eff = sol.lambda_eff;
        row.report = evaluate_stackelberg(p, s, sol, conv);
        keep_paths(
            row, c.path_points, s.horizon, s.trader_terminal, s.demand,
            [&](double t) { return sol.leader.shares(t); }, [&](double t) { return sol.leader.rate(t); },
            [&](double t) { return sol.manager_shares(t); }, [&](double t) { return sol.manager_rate(t); });
        break;
      }
    }
    if (c.verify) {
      row.verification = oracle::verify_scenario(p, s, c.regime, conv);
      row.verified = true;
    }
  } catch (const SolverError& e) {
    row.status = RowStatus::SolverError;
    row.message = e.what();
  } catch (const DomainError& e) {
    row.status = RowStatus::DomainError;
    row.message = e.what();
  }
  return row;
}

std::vector<ResultRow> evaluate_all(const RunConfig& c) {
  const auto specs = expand_scenarios(c);
  std::vector<ResultRow> rows(specs.size());
  unsigned workers = c.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, specs.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) rows[i] = evaluate_scenario(c, i, specs[i]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < specs.size(); i = next++) rows[i] = evaluate_scenario(c, i, specs[i]);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {
      "index", "regime", "lambda", "demand", "participation", "trader_terminal", "manager_fraction",
      "start_day", "tau", "horizon", "lambda_eff", "status", "cost_usd", "benchmark_cost_usd", "savings_usd",
      "savings_bps", "tracking_error_bps", "trader_cost_usd", "trader_profit_usd", "trader_profit_bps",
      "benchmark_no_trader_usd", "savings_no_trader_usd", "savings_no_trader_bps", "drag_bps", "verified",
      "verification_passed", "cost_rel_err", "el_residual", "bc_max", "br_deviation", "message"};
  return cols;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out;
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const auto& r : rows) {
    const auto& s = r.scenario;
    const auto& e = r.report;
    const auto& v = r.verification;
    const double bc_max = *std::max_element(v.bc_errors.begin(), v.bc_errors.end());
    const std::vector<std::string> fields = {
        std::to_string(r.index), std::string(to_string(r.regime)), format_number(s.lambda),
        format_number(s.demand), format_number(r.participation), format_number(s.trader_terminal),
        format_number(s.manager_fraction), format_number(s.start_day), format_number(s.tau),
        format_number(s.horizon), format_number(r.lambda_eff), std::string(to_string(r.status)),
        format_number(e.cost_usd), format_number(e.benchmark_cost_usd), format_number(e.savings_usd),
        format_number(e.savings_bps), format_number(e.tracking_error_bps), format_number(e.trader_cost_usd),
        format_number(e.trader_profit_usd), format_number(e.trader_profit_bps),
        format_number(e.benchmark_no_trader_usd), format_number(e.savings_no_trader_usd),
        format_number(e.savings_no_trader_bps), format_number(e.drag_bps), r.verified ? "1" : "0",
        r.verified ? (v.passed() ? "1" : "0") : "", r.verified ? format_number(v.cost_rel_err) : "",
        r.verified ? format_number(v.el_residual_norm) : "", r.verified ? format_number(bc_max) : "",
        r.verified ? format_number(v.br_deviation) : "", csv_field(r.message)};
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
    out += '\n';
  }
  return out;
}

std::string path_csv(const ResultRow& row, std::size_t points) {
  std::string out = "time,trader_shares,trader_rate,manager_shares,manager_rate\n";
  if (!row.trader_path || !row.manager_path) return out;
  const auto& x = *row.trader_path;
  const auto& y = *row.manager_path;
  const auto xd = x.rates();
  const auto yd = y.rates();
  const std::size_t n = std::min(points == 0 ? x.size() : points, x.size());
  for (std::size_t i = 0; i < n; ++i) {
    out += format_number(x.times()[i]) + ',' + format_number(x.shares()[i]) + ',' + format_number(xd[i]) + ',' +
           format_number(y.shares()[i]) + ',' + format_number(yd[i]) + '\n';
  }
  return out;
}

std::string manifest_json(const RunConfig& c, const std::vector<ResultRow>& rows) {
  json m;
  m["schema_version"] = kConfigSchemaVersion;
  m["name"] = c.name;
  m["regime"] = std::string(to_string(c.regime));
  m["preset"] = c.preset;
  m["config"] = json::parse(config_to_json(c, -1));
  m["conventions"] = {
      {"lambda_scaling", std::string(to_string(c.conventions.lambda_scaling))},
      {"proceeds", std::string(to_string(c.conventions.proceeds))},
      {"evaluation", std::string(to_string(c.conventions.evaluation))},
      {"benchmark", std::string(to_string(c.conventions.benchmark))},
      {"grid_points", c.conventions.grid_points == 0 ? std::string("default (200 per day + 1)")
                                                     : std::to_string(c.conventions.grid_points)},
  };
  const oracle::Tolerances tol;
  m["tolerances"] = {{"cost_rel", tol.cost_rel},
                     {"el_residual", "1e-4 * D / t_N^2"},
                     {"boundary", "1e-8 * max(1, D)"},
                     {"best_response", "1e-3 * D"}};
  m["float_format"] = "%.10g";
  std::size_t errors = 0;
  std::size_t failures = 0;
  json notes = json::array();
  for (const auto& r : rows) {
    if (r.status != RowStatus::Ok) {
      ++errors;
      notes.push_back("scenario " + std::to_string(r.index) + ": " + r.message);
    }
    if (r.verified && !r.verification.passed()) ++failures;
    for (const auto& n : r.verification.notes) notes.push_back("scenario " + std::to_string(r.index) + ": " + n);
  }
  m["scenario_count"] = rows.size();
  m["errors"] = errors;
  m["verification_failures"] = failures;
  m["diagnostics"] = notes;
  if (!c.notes.empty()) m["notes"] = c.notes;
  return m.dump(2) + "\n";
}

RunSummary run(const RunConfig& c) {
  c.validate();
  RunSummary summary;
  summary.rows = evaluate_all(c);
  for (const auto& r : summary.rows) {
    if (r.status != RowStatus::Ok) ++summary.errors;
    if (r.verified && !r.verification.passed()) ++summary.verification_failures;
  }

  namespace fs = std::filesystem;
  fs::create_directories(c.output_dir);
  auto emit = [&](const fs::path& rel, const std::string& content) {
    write_file(c.output_dir / rel, content);
    summary.files.push_back(rel);
  };
  emit("results.csv", results_csv(summary.rows));
  const TableFiles tables = make_tables(c.regime, summary.rows);
  emit("table.csv", tables.csv);
  emit("table.txt", tables.text);
  if (c.path_points > 0) {
    fs::create_directories(c.output_dir / "paths");
    for (const auto& r : summary.rows) {
      char name[48];
      std::snprintf(name, sizeof name, "scenario_%04zu.csv", r.index);
      emit(fs::path("paths") / name, path_csv(r, c.path_points));
    }
  }
  emit("manifest.json", manifest_json(c, summary.rows));
  return summary;
}

}  // namespace recon
