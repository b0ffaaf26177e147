#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "recon/errors.hpp"
#include "recon/runner.hpp"

namespace recon {

using nlohmann::json;

namespace {

struct AxisField {
  const char* key;
  Axis SweepLists::*member;
};

constexpr AxisField kAxes[] = {
    {"lambda", &SweepLists::lambda},
    {"demand", &SweepLists::demand},
    {"participation", &SweepLists::participation},
    {"manager_fraction", &SweepLists::manager_fraction},
    {"start_day", &SweepLists::start_day},
    {"tau", &SweepLists::tau},
    {"horizon", &SweepLists::horizon},
};

struct ParamField {
  const char* key;
  double ImpactParams::*member;
};

constexpr ParamField kParams[] = {
    {"s0", &ImpactParams::s0},
    {"gamma", &ImpactParams::gamma},
    {"eta", &ImpactParams::eta},
    {"epsilon", &ImpactParams::epsilon},
    {"sigma_annual", &ImpactParams::sigma_annual},
    {"w_bench", &ImpactParams::w_bench},
    {"dt_bench", &ImpactParams::dt_bench},
};

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

bool flag(const json& v, const std::string& what) {
  if (!v.is_boolean()) throw ConfigError(what + " must be true or false");
  return v.get<bool>();
}

std::size_t count(const json& v, const std::string& what) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(what + " must be an integer");
  const auto n = v.get<long long>();
  if (n < 0) throw ConfigError(what + " must be non-negative");
  return static_cast<std::size_t>(n);
}

std::vector<double> axis_or(const Axis& a, std::vector<double> fallback) {
  return a ? *a : fallback;
}

}  // namespace

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  for (const auto& ax : kAxes) {
    const Axis& a = sweep.*ax.member;
    if (a && a->empty()) throw ConfigError(std::string("sweep.") + ax.key + " must not be empty");
  }
  if (!sweep.lambda) throw ConfigError("sweep.lambda is required");
  if (!sweep.demand) throw ConfigError("sweep.demand is required");
  const bool game = regime == Regime::Nash || regime == Regime::Stackelberg;
  if (game && !sweep.participation) throw ConfigError("sweep.participation is required for game regimes");
  if (regime == Regime::NoTrader && sweep.participation) {
    throw ConfigError("sweep.participation does not apply to the no_trader regime");
  }
  if (regime == Regime::Stackelberg && !sweep.tau) throw ConfigError("sweep.tau is required for stackelberg");
  if (regime != Regime::Stackelberg && sweep.tau) throw ConfigError("sweep.tau applies only to stackelberg");
  if (regime == Regime::Linear) {
    if (!sweep.manager_fraction) throw ConfigError("sweep.manager_fraction is required for linear");
    if (!sweep.start_day) throw ConfigError("sweep.start_day is required for linear");
  } else if (sweep.manager_fraction || sweep.start_day) {
    throw ConfigError("sweep.manager_fraction and sweep.start_day apply only to linear");
  }
  if (conventions.grid_points != 0 && (conventions.grid_points < 5 || conventions.grid_points % 2 == 0)) {
    throw ConfigError("conventions.grid_points must be 0 or an odd number >= 5");
  }
  if (path_points == 1 || path_points == 2) throw ConfigError("path_points must be 0 or at least 3");
  if (!(aum > 0.0)) throw ConfigError("aum must be positive");
  if (conventions.evaluation == CostEvaluation::Stepwise) {
    for (double h : axis_or(sweep.horizon, {10.0})) {
      try {
        stepwise_intervals(params, h);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    }
  }
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"schema_version", "name", "notes", "regime", "preset", "params", "aum", "sweep", "conventions",
                  "verify", "output_dir", "threads", "path_points"},
                 "config");
  if (!doc.contains("schema_version")) throw ConfigError("schema_version is required");
  if (count(doc["schema_version"], "schema_version") != static_cast<std::size_t>(kConfigSchemaVersion)) {
    throw ConfigError("unsupported schema_version");
  }
  RunConfig c;
  if (!doc.contains("regime")) throw ConfigError("regime is required");
  c.regime = parse_regime(text(doc["regime"], "regime"));
  if (doc.contains("name")) c.name = text(doc["name"], "name");
  if (doc.contains("notes")) c.notes = text(doc["notes"], "notes");
  if (doc.contains("preset")) c.preset = text(doc["preset"], "preset");
  c.params = preset(c.preset);
  if (doc.contains("params")) {
    const json& pj = doc["params"];
    if (!pj.is_object()) throw ConfigError("params must be an object");
    reject_unknown(pj, {"s0", "gamma", "eta", "epsilon", "sigma_annual", "w_bench", "dt_bench"}, "params");
    for (const auto& f : kParams) {
      if (pj.contains(f.key)) c.params.*f.member = number(pj[f.key], std::string("params.") + f.key);
    }
  }
  if (doc.contains("aum")) c.aum = number(doc["aum"], "aum");
  if (!doc.contains("sweep") || !doc["sweep"].is_object()) throw ConfigError("sweep object is required");
  const json& sj = doc["sweep"];
  reject_unknown(sj, {"lambda", "demand", "participation", "manager_fraction", "start_day", "tau", "horizon"},
                 "sweep");
  for (const auto& ax : kAxes) {
    if (!sj.contains(ax.key)) continue;
    const json& arr = sj[ax.key];
    if (!arr.is_array()) throw ConfigError(std::string("sweep.") + ax.key + " must be a list");
    std::vector<double> values;
    for (const auto& v : arr) values.push_back(number(v, std::string("sweep.") + ax.key + " entry"));
    c.sweep.*ax.member = std::move(values);
  }
  if (doc.contains("conventions")) {
    const json& cj = doc["conventions"];
    if (!cj.is_object()) throw ConfigError("conventions must be an object");
    reject_unknown(cj, {"lambda_scaling", "proceeds", "evaluation", "benchmark", "grid_points"}, "conventions");
    if (cj.contains("lambda_scaling")) {
      c.conventions.lambda_scaling = parse_lambda_scaling(text(cj["lambda_scaling"], "lambda_scaling"));
    }
    if (cj.contains("proceeds")) c.conventions.proceeds = parse_proceeds(text(cj["proceeds"], "proceeds"));
    if (cj.contains("evaluation")) {
      c.conventions.evaluation = parse_evaluation(text(cj["evaluation"], "evaluation"));
    }
    if (cj.contains("benchmark")) c.conventions.benchmark = parse_benchmark(text(cj["benchmark"], "benchmark"));
    if (cj.contains("grid_points")) c.conventions.grid_points = count(cj["grid_points"], "grid_points");
  }
  if (doc.contains("verify")) c.verify = flag(doc["verify"], "verify");
  if (doc.contains("output_dir")) c.output_dir = text(doc["output_dir"], "output_dir");
  if (doc.contains("threads")) c.threads = static_cast<unsigned>(count(doc["threads"], "threads"));
  if (doc.contains("path_points")) c.path_points = count(doc["path_points"], "path_points");
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& c, int indent) {
  json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["name"] = c.name;
  if (!c.notes.empty()) doc["notes"] = c.notes;
  doc["regime"] = std::string(to_string(c.regime));
  doc["preset"] = c.preset;
  json pj;
  for (const auto& f : kParams) pj[f.key] = c.params.*f.member;
  doc["params"] = pj;
  doc["aum"] = c.aum;
  json sj = json::object();
  for (const auto& ax : kAxes) {
    const Axis& a = c.sweep.*ax.member;
    if (a) sj[ax.key] = *a;
  }
  doc["sweep"] = sj;
  doc["conventions"] = {
      {"lambda_scaling", std::string(to_string(c.conventions.lambda_scaling))},
      {"proceeds", std::string(to_string(c.conventions.proceeds))},
      {"evaluation", std::string(to_string(c.conventions.evaluation))},
      {"benchmark", std::string(to_string(c.conventions.benchmark))},
      {"grid_points", c.conventions.grid_points},
  };
  doc["verify"] = c.verify;
  doc["output_dir"] = c.output_dir.generic_string();
  doc["threads"] = c.threads;
  doc["path_points"] = c.path_points;
  return doc.dump(indent);
}

std::vector<ScenarioSpec> expand_scenarios(const RunConfig& c) {
  const auto& lambdas = *c.sweep.lambda;
  const auto& demands = *c.sweep.demand;
  const auto parts = axis_or(c.sweep.participation, {0.0});
  const auto fracs = axis_or(c.sweep.manager_fraction, {1.0});
  const auto starts = axis_or(c.sweep.start_day, {0.0});
  const auto taus = axis_or(c.sweep.tau, {1.0});
  const auto horizons = axis_or(c.sweep.horizon, {10.0});
  std::vector<ScenarioSpec> out;
  for (double lam : lambdas)
    for (double d : demands)
      for (double f : parts)
        for (double mf : fracs)
          for (double sd : starts)
            for (double tau : taus)
              for (double h : horizons) {
                ScenarioSpec spec;
                spec.scenario.lambda = lam;
                spec.scenario.demand = d;
                spec.scenario.trader_terminal = f * d;
                spec.scenario.manager_fraction = mf;
                spec.scenario.start_day = sd;
                spec.scenario.tau = tau;
                spec.scenario.horizon = h;
                spec.scenario.aum = c.aum;
                spec.participation = f;
                out.push_back(spec);
              }
  return out;
}

}  // namespace recon
