#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "recon/errors.hpp"
#include "recon/runner.hpp"

namespace recon {

namespace {

constexpr const char* kTableHeader =
    "lambda,demand,participation,tau,manager_fraction,start_day,savings_usd,savings_bps,"
    "tracking_error_bps,profit_usd,profit_bps";

constexpr double TableRow::*kColumns[] = {
    &TableRow::lambda,        &TableRow::demand,      &TableRow::participation,
    &TableRow::tau,           &TableRow::manager_fraction, &TableRow::start_day,
    &TableRow::savings_usd,   &TableRow::savings_bps, &TableRow::tracking_error_bps,
    &TableRow::profit_usd,    &TableRow::profit_bps,
};

std::string money(double usd, double bps) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fmm (%.0fbps)", usd / 1e6, bps);
  return buf;
}

std::string bps(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fbps", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string shares(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gmm", d / 1e6);
  return buf;
}

std::vector<double> distinct(const std::vector<TableRow>& rows, double TableRow::*m) {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.*m) == out.end()) out.push_back(r.*m);
  }
  return out;
}

// Fixed-width text table: first row is the header.
std::string layout(const std::vector<std::vector<std::string>>& cells) {
  if (cells.empty()) return {};
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      out += cells[r][i];
      if (i + 1 < cells[r].size()) out += std::string(width[i] - cells[r][i].size() + 2, ' ');
    }
    out += '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + '\n';
    }
  }
  return out;
}

const TableRow* find(const std::vector<TableRow>& rows, double lam, double d) {
  for (const auto& r : rows)
    if (r.lambda == lam && r.demand == d) return &r;
  return nullptr;
}

}  // namespace

std::vector<TableRow> table_rows(const std::vector<ResultRow>& rows) {
  std::vector<TableRow> out;
  for (const auto& r : rows) {
    if (r.status != RowStatus::Ok) continue;
    TableRow t;
    t.lambda = r.scenario.lambda;
    t.demand = r.scenario.demand;
    t.participation = r.participation;
    t.tau = r.scenario.tau;
    t.manager_fraction = r.scenario.manager_fraction;
    t.start_day = r.scenario.start_day;
    t.savings_usd = r.report.savings_usd;
    t.savings_bps = r.report.savings_bps;
    t.tracking_error_bps = r.report.tracking_error_bps;
    t.profit_usd = r.report.trader_profit_usd;
    t.profit_bps = r.report.trader_profit_bps;
    out.push_back(t);
  }
  return out;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::string out = std::string(kTableHeader) + '\n';
  for (const auto& r : rows) {
    bool first = true;
    for (auto m : kColumns) {
      if (!first) out += ',';
      out += format_number(r.*m);
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::vector<TableRow> parse_table_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) throw ConfigError("table csv: unexpected header");
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TableRow r;
    std::size_t pos = 0;
    std::size_t col = 0;
    for (auto m : kColumns) {
      const std::size_t end = line.find(',', pos);
      const std::string field = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      char* stop = nullptr;
      r.*m = std::strtod(field.c_str(), &stop);
      if (field.empty() || *stop != '\0') throw ConfigError("table csv: bad number '" + field + "'");
      ++col;
      if (end == std::string::npos) {
        if (col != std::size(kColumns)) throw ConfigError("table csv: short row");
        pos = std::string::npos;
        break;
      }
      pos = end + 1;
    }
    if (pos != std::string::npos) throw ConfigError("table csv: long row");
    rows.push_back(r);
  }
  return rows;
}

std::string table_text(Regime regime, const std::vector<TableRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  switch (regime) {
    case Regime::NoTrader: {
      const auto demands = distinct(rows, &TableRow::demand);
      std::vector<std::string> head = {"lambda"};
      for (double d : demands) {
        head.push_back("Savings D=" + shares(d));
        head.push_back("TE D=" + shares(d));
      }
      cells.push_back(head);
      for (double lam : distinct(rows, &TableRow::lambda)) {
        std::vector<std::string> line = {num(lam)};
        for (double d : demands) {
          const TableRow* r = find(rows, lam, d);
          line.push_back(r ? money(r->savings_usd, r->savings_bps) : "---");
          line.push_back(r ? bps(r->tracking_error_bps) : "---");
        }
        cells.push_back(line);
      }
      break;
    }
    case Regime::Nash: {
      const auto parts = distinct(rows, &TableRow::participation);
      std::vector<std::string> head = {"lambda", "D", "Savings", "TE", "f"};
      for (double f : parts) head.push_back("Profit f=" + num(f));
      cells.push_back(head);
      std::vector<std::pair<double, double>> keys;
      for (const auto& r : rows) {
        const std::pair<double, double> key{r.lambda, r.demand};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
      }
      for (const auto& [lam, d] : keys) {
        const TableRow* first = find(rows, lam, d);
        std::vector<std::string> line = {num(lam), shares(d), money(first->savings_usd, first->savings_bps),
                                         bps(first->tracking_error_bps), num(first->participation)};
        for (double f : parts) {
          const TableRow* hit = nullptr;
          for (const auto& r : rows)
            if (r.lambda == lam && r.demand == d && r.participation == f) hit = &r;
          line.push_back(hit ? money(hit->profit_usd, hit->profit_bps) : "---");
        }
        cells.push_back(line);
      }
      break;
    }
    case Regime::Stackelberg:
      cells.push_back({"lambda", "D", "Savings", "TE", "f", "tau", "Profit"});
      for (const auto& r : rows) {
        cells.push_back({num(r.lambda), shares(r.demand), money(r.savings_usd, r.savings_bps),
                         bps(r.tracking_error_bps), num(r.participation), num(r.tau),
                         money(r.profit_usd, r.profit_bps)});
      }
      break;
    case Regime::Linear:
      cells.push_back({"D", "T/D", "f", "d", "Savings", "TE"});
      for (const auto& r : rows) {
        cells.push_back({shares(r.demand), num(r.participation), num(r.manager_fraction), num(r.start_day),
                         money(r.savings_usd, r.savings_bps), bps(r.tracking_error_bps)});
      }
      break;
  }
  return layout(cells);
}

TableFiles make_tables(Regime regime, const std::vector<ResultRow>& rows) {
  const auto t = table_rows(rows);
  return {table_csv(t), table_text(regime, t)};
}

}  // namespace recon
