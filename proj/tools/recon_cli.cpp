// recon: solve, evaluate and verify index-reconstitution execution scenarios.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recon/conventions.hpp"
#include "recon/errors.hpp"
#include "recon/oracle.hpp"
#include "recon/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kVerifyFailed = 4;

struct Flags {
  std::string config;
  std::vector<double> lambda;
  std::vector<double> demand;
  std::vector<double> participation;
  std::vector<double> manager_fraction;
  std::vector<double> start_day;
  std::vector<double> tau;
  std::vector<double> horizon;
  std::size_t grid = 0;
  std::string preset;
  std::string out;
  bool verify = false;
  std::string regime;
  std::string lambda_scaling;
  std::string evaluation;
  std::string proceeds;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--lambda", f.lambda, "tracking-error weights (1/day)")->delimiter(',');
  cmd->add_option("--demand", f.demand, "manager demand D (shares)")->delimiter(',');
  cmd->add_option("--participation", f.participation, "trader participation T/D")->delimiter(',');
  cmd->add_option("--manager-fraction", f.manager_fraction, "linear: fraction of D bought early")->delimiter(',');
  cmd->add_option("--start-day", f.start_day, "linear: first day of manager buying")->delimiter(',');
  cmd->add_option("--tau", f.tau, "stackelberg: leader front-loading constant (days)")->delimiter(',');
  cmd->add_option("--horizon", f.horizon, "t_N (days)")->delimiter(',');
  cmd->add_option("--grid", f.grid, "quadrature grid points (odd)");
  cmd->add_option("--preset", f.preset, "parameter preset")
      ->check(CLI::IsMember({"large-cap", "mid-cap", "small-cap", "core"}));
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--verify", f.verify, "run the numerical oracle on every scenario");
  cmd->add_option("--lambda-scaling", f.lambda_scaling, "benchmark_cost | raw");
  cmd->add_option("--evaluation", f.evaluation, "continuous | stepwise");
  cmd->add_option("--proceeds", f.proceeds, "conservative | benchmark_rate");
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
}

recon::RunConfig build_config(const Flags& f, std::optional<recon::Regime> regime, const std::string& name) {
  recon::RunConfig c;
  if (!f.config.empty()) c = recon::load_config(f.config);
  if (regime) c.regime = *regime;
  if (f.config.empty()) {
    c.name = name;
    c.output_dir = std::filesystem::path("out") / name;
    c.sweep.lambda = std::vector<double>{0.0};
    c.sweep.demand = std::vector<double>{5e6};
    if (c.regime == recon::Regime::Nash || c.regime == recon::Regime::Stackelberg) {
      c.sweep.participation = std::vector<double>{0.1};
    }
    if (c.regime == recon::Regime::Linear) {
      c.sweep.manager_fraction = std::vector<double>{1.0};
      c.sweep.start_day = std::vector<double>{0.0};
    }
    if (c.regime == recon::Regime::Stackelberg) c.sweep.tau = std::vector<double>{1.0};
  }
  if (!f.preset.empty()) {
    c.preset = f.preset;
    c.params = recon::preset(f.preset);
  }
  auto over = [](recon::Axis& axis, const std::vector<double>& v) {
    if (!v.empty()) axis = v;
  };
  over(c.sweep.lambda, f.lambda);
  over(c.sweep.demand, f.demand);
  over(c.sweep.participation, f.participation);
  over(c.sweep.manager_fraction, f.manager_fraction);
  over(c.sweep.start_day, f.start_day);
  over(c.sweep.tau, f.tau);
  over(c.sweep.horizon, f.horizon);
  if (f.grid != 0) c.conventions.grid_points = f.grid;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.verify) c.verify = true;
  if (!f.lambda_scaling.empty()) c.conventions.lambda_scaling = recon::parse_lambda_scaling(f.lambda_scaling);
  if (!f.evaluation.empty()) c.conventions.evaluation = recon::parse_evaluation(f.evaluation);
  if (!f.proceeds.empty()) c.conventions.proceeds = recon::parse_proceeds(f.proceeds);
  if (f.threads != 0) c.threads = f.threads;
  c.validate();
  return c;
}

int report(const recon::RunSummary& s, const recon::RunConfig& c) {
  std::cout << recon::make_tables(c.regime, s.rows).text;
  for (const auto& r : s.rows) {
    if (r.status != recon::RowStatus::Ok) {
      std::cerr << "scenario " << r.index << ": " << recon::to_string(r.status) << ": " << r.message << "\n";
    }
  }
  std::cout << "wrote " << s.files.size() << " files to " << c.output_dir.string() << "\n";
  if (s.errors > 0) return kSolverError;
  if (s.verification_failures > 0) return kVerifyFailed;
  return kOk;
}

int run_verify(const recon::RunConfig& c) {
  int failures = 0;
  int errors = 0;
  const auto specs = recon::expand_scenarios(c);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i].scenario;
    try {
      const auto rep = recon::oracle::verify_scenario(c.params, s, c.regime, c.conventions);
      std::printf("scenario %zu  lambda=%g D=%g T=%g: %s\n", i, s.lambda, s.demand, s.trader_terminal,
                  rep.passed() ? "PASS" : "FAIL");
      for (const auto& ch : rep.checks) {
        std::printf("  %-16s %12.4e  tol %10.3e  %s\n", ch.name.c_str(), ch.value, ch.tolerance,
                    ch.passed ? "ok" : "FAIL");
      }
      for (const auto& n : rep.notes) std::printf("  note: %s\n", n.c_str());
      if (!rep.passed()) ++failures;
    } catch (const recon::SolverError& e) {
      std::printf("scenario %zu: solver error: %s\n", i, e.what());
      ++errors;
    } catch (const recon::DomainError& e) {
      std::printf("scenario %zu: domain error: %s\n", i, e.what());
      ++errors;
    }
  }
  if (errors > 0) return kSolverError;
  return failures > 0 ? kVerifyFailed : kOk;
}

int run_price_path(const Flags& f) {
  recon::RunConfig c;
  recon::ScenarioParams s;
  if (!f.config.empty()) {
    c = recon::load_config(f.config);
    s = recon::expand_scenarios(c).front().scenario;
  } else {
    c.params.gamma = 3e-7;
    c.output_dir = "out/price_path";
    s.demand = 5e6;
    s.trader_terminal = 0.9 * s.demand;
    s.horizon = 5.0;
  }
  if (!f.preset.empty()) c.params = recon::preset(f.preset);
  if (!f.demand.empty()) s.demand = f.demand.front();
  if (!f.participation.empty()) s.trader_terminal = f.participation.front() * s.demand;
  if (!f.horizon.empty()) s.horizon = f.horizon.front();
  if (!f.out.empty()) c.output_dir = f.out;
  c.params.validate();
  s.validate();
  const std::size_t points = f.grid != 0 ? f.grid : recon::default_grid_points(s.horizon);
  const auto scenario = recon::price_path_scenario(c.params, s, points);
  std::filesystem::create_directories(c.output_dir);
  const auto file = c.output_dir / "price_path.csv";
  std::ofstream(file, std::ios::binary) << recon::price_path_csv(scenario.records);
  const auto& d = scenario.decomposition;
  std::printf("cumulative mid-price return at t_N-: %.4f%%\n", 100.0 * d.cum_return);
  std::printf("  permanent  %.4f%%\n  temporary  %.4f%%\n  spread     %.4f%%\n", 100.0 * d.permanent,
              100.0 * d.temporary, 100.0 * d.spread);
  std::printf("  execution price return %.4f%%\n", 100.0 * (d.permanent + d.temporary + d.spread));
  std::printf("wrote %s\n", file.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal execution around index reconstitution: no-trader, linear, Nash and Stackelberg regimes"};
  app.require_subcommand(1);

  Flags f;
  struct Sub {
    const char* name;
    const char* help;
    std::optional<recon::Regime> regime;
  };
  const Sub subs[] = {
      {"no-trader", "manager alone, closed-form optimum", recon::Regime::NoTrader},
      {"linear", "manager and trader both build linearly", recon::Regime::Linear},
      {"nash", "simultaneous-move equilibrium", recon::Regime::Nash},
      {"stackelberg", "trader leads with an exponential plan, manager responds", recon::Regime::Stackelberg},
      {"sweep", "run a configuration file as written", std::nullopt},
      {"verify", "check closed forms against the numerical oracle", std::nullopt},
      {"price-path", "price path while a trader builds ahead of a waiting manager", std::nullopt},
  };
  std::vector<CLI::App*> cmds;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, f);
    if (std::string(s.name) == "verify") cmd->add_option("--regime", f.regime, "regime when no config is given");
    cmds.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (!cmds[i]->parsed()) continue;
      const std::string name = subs[i].name;
      if (name == "price-path") return run_price_path(f);
      if (name == "sweep") {
        if (f.config.empty()) throw recon::ConfigError("sweep needs --config");
        const auto c = build_config(f, std::nullopt, name);
        return report(recon::run(c), c);
      }
      if (name == "verify") {
        std::optional<recon::Regime> regime;
        if (!f.regime.empty()) regime = recon::parse_regime(f.regime);
        if (f.config.empty() && !regime) throw recon::ConfigError("verify needs --config or --regime");
        return run_verify(build_config(f, regime, name));
      }
      const auto c = build_config(f, subs[i].regime, name);
      return report(recon::run(c), c);
    }
  } catch (const recon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const recon::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const recon::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
