#include "aoi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include "json.hpp"
#include <stdexcept>
#include <string>

#include "aoi/errors.hpp"
#include "aoi/format.hpp"
#include "aoi/optimizer.hpp"

namespace aoi {
namespace {

constexpr double kCeiling = 0.531;
constexpr double kCeilingSlack = 1e-3;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      cell);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void check_axis(const std::vector<double>& values, const char* name, double lo, bool lo_open, double hi,
                bool hi_open) {
  if (values.empty()) {
    throw DomainError(std::string(name) + " grid is empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const bool above = lo_open ? v > lo : v >= lo;
    const bool below = hi_open ? v < hi : v <= hi;
    if (!std::isfinite(v) || !above || !below) {
      throw DomainError(std::string(name) + " grid value out of range: " + format_double(v));
    }
    if (i > 0 && !(values[i - 1] < v)) {
      throw DomainError(std::string(name) + " grid must be strictly increasing");
    }
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rho(const std::vector<double>& v) { check_axis(v, "rho", 0.0, true, 1.0, true); }
void check_beta(const std::vector<double>& v, bool allow_zero) {
  check_axis(v, "beta", 0.0, !allow_zero, 1.0, false);
}
void check_a(const std::vector<double>& v) { check_axis(v, "a", 0.0, true, kInf, true); }

// Rounds away accumulated binary drift so grid values print cleanly.
double tidy(double v) { return std::round(v * 1e12) / 1e12; }

std::string status_of(const OptimResult& r) { return r.converged ? "ok" : "not_converged"; }

// Tables that report f(rho*) need an eavesdropper; beta == 0 has no objective.
OptimResult welfare_optimum(double beta, double a, double mu) {
  if (beta == 0.0) {
    throw DomainError("objective is unbounded without an eavesdropper (beta == 0)");
  }
  return maximize_objective(beta, TradeoffWeight(a), mu);
}

}  // namespace

std::size_t Table::column_index(const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) {
    throw std::out_of_range("no column '" + column + "' in table " + name);
  }
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& column) const {
  return std::get<double>(rows.at(row).at(column_index(column)));
}

const std::string& Table::text(std::size_t row, const std::string& column) const {
  return std::get<std::string>(rows.at(row).at(column_index(column)));
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.columns[i]);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_field(cell_text(row[i]));
    }
    out << "\r\n";
  }
}

void write_jsonl(const Table& table, std::ostream& out) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[table.columns[i]] = v; }, row[i]);
    }
    out << obj.dump() << '\n';
  }
}

std::string figure_id(OutputKind kind) {
  switch (kind) {
    case OutputKind::objective_curve: return "fig1";
    case OutputKind::rho_star_vs_beta: return "fig2";
    case OutputKind::f_star_vs_a: return "fig3";
    case OutputKind::rho_star_vs_a: return "fig4";
    case OutputKind::asymptote_curve: return "asymptote";
  }
  throw std::logic_error("unknown output kind");
}

OutputKind parse_output_kind(const std::string& figure) {
  for (OutputKind k : {OutputKind::objective_curve, OutputKind::rho_star_vs_beta, OutputKind::f_star_vs_a,
                       OutputKind::rho_star_vs_a, OutputKind::asymptote_curve}) {
    if (figure == figure_id(k)) return k;
  }
  throw DomainError("unknown figure '" + figure + "'");
}

void SweepGrid::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("service rate must be positive and finite");
  }
  switch (output_kind) {
    case OutputKind::objective_curve:
      check_rho(rho_values);
      check_beta(beta_values, false);
      check_a(a_values);
      if (a_values.size() != 1) {
        throw DomainError("objective curves take exactly one a value");
      }
      break;
    case OutputKind::rho_star_vs_beta:
      check_beta(beta_values, true);
      check_a(a_values);
      break;
    case OutputKind::f_star_vs_a:
    case OutputKind::rho_star_vs_a:
      check_beta(beta_values, false);
      check_a(a_values);
      break;
    case OutputKind::asymptote_curve:
      check_a(a_values);
      break;
  }
}

std::string SweepGrid::hash() const {
  std::string canon = figure_id(output_kind) + ";mu=" + format_double(mu);
  auto add = [&](const char* name, const std::vector<double>& values) {
    canon += ";";
    canon += name;
    canon += "=";
    for (std::size_t i = 0; i < values.size(); ++i) {
      canon += (i ? "," : "") + format_double(values[i]);
    }
  };
  add("rho", rho_values);
  add("beta", beta_values);
  add("a", a_values);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string SweepGrid::file_name(const std::string& extension) const {
  return figure_id(output_kind) + "_" + hash() + "." + extension;
}

std::vector<double> linear_grid(double min, double max, double step) {
  if (!(step > 0.0) || !(min <= max) || !std::isfinite(min) || !std::isfinite(max)) {
    throw DomainError("linear grid needs min <= max and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(tidy(min + static_cast<double>(i) * step));
  }
  return out;
}

std::vector<double> log_grid(double min, double max, int points) {
  if (!(min > 0.0) || !(min <= max) || points < 1 || (points == 1 && min != max)) {
    throw DomainError("log grid needs 0 < min <= max and at least one point");
  }
  if (points == 1) return {min};
  const double lo = std::log10(min);
  const double hi = std::log10(max);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out.push_back(i == 0 ? min : i == points - 1 ? max : std::pow(10.0, lo + (hi - lo) * i / (points - 1)));
  }
  return out;
}

SweepGrid default_grid(OutputKind kind) {
  SweepGrid grid;
  grid.output_kind = kind;
  grid.rho_values = linear_grid(0.01, 0.99, 0.005);
  grid.beta_values = linear_grid(0.05, 1.0, 0.05);
  grid.a_values = kind == OutputKind::objective_curve ? std::vector<double>{1.0} : log_grid(1e-4, 1e2, 50);
  return grid;
}

ObjectiveCurves fig1_objective_curves(std::span<const double> betas, TradeoffWeight w,
                                      std::span<const double> rho_grid, double mu) {
  ObjectiveCurves out;
  out.curves.name = "fig1";
  out.curves.columns = {"beta", "rho", "f", "status"};
  out.argmax.name = "fig1_argmax";
  out.argmax.columns = {"beta", "rho_grid_argmax", "f_grid_max", "rho_star", "f_star", "status"};

  for (double beta : betas) {
    double best_rho = kNaN;
    double best_f = -kInf;
    for (double rho : rho_grid) {
      try {
        const double f = bergson_objective(SystemParams::from_load(rho, mu, beta), w);
        out.curves.rows.push_back({beta, rho, f, std::string("ok")});
        if (f > best_f) {
          best_f = f;
          best_rho = rho;
        }
      } catch (const DomainError&) {
        out.curves.rows.push_back({beta, rho, kNaN, std::string("domain_error")});
      }
    }
    try {
      const OptimResult r = welfare_optimum(beta, w.a(), mu);
      out.argmax.rows.push_back({beta, best_rho, best_f, r.rho_star, r.objective_at_star, status_of(r)});
    } catch (const DomainError&) {
      out.argmax.rows.push_back({beta, best_rho, best_f, kNaN, kNaN, std::string("domain_error")});
    }
  }
  return out;
}

Table fig2_rho_star_vs_beta(std::span<const double> a_list, std::span<const double> beta_grid, double mu) {
  Table t{"fig2", {"a", "beta", "rho_star", "f_star", "converged", "below_ceiling", "status"}, {}};
  for (double a : a_list) {
    for (double beta : beta_grid) {
      try {
        const OptimResult r = maximize_objective(beta, TradeoffWeight(a), mu);
        // beta == 0 has no welfare objective; f_star is left empty there.
        const double f_star = beta > 0.0 ? r.objective_at_star : kNaN;
        t.rows.push_back({a, beta, r.rho_star, f_star, r.converged,
                          r.rho_star <= kCeiling + kCeilingSlack, status_of(r)});
      } catch (const DomainError&) {
        t.rows.push_back({a, beta, kNaN, kNaN, false, false, std::string("domain_error")});
      }
    }
  }
  return t;
}

Table fig3_f_star_vs_a(std::span<const double> betas, std::span<const double> a_grid, double mu) {
  Table t{"fig3", {"beta", "a", "rho_star", "f_star", "status"}, {}};
  for (double beta : betas) {
    for (double a : a_grid) {
      try {
        const OptimResult r = welfare_optimum(beta, a, mu);
        t.rows.push_back({beta, a, r.rho_star, r.objective_at_star, status_of(r)});
      } catch (const DomainError&) {
        t.rows.push_back({beta, a, kNaN, kNaN, std::string("domain_error")});
      }
    }
  }
  return t;
}

Table fig4_rho_star_vs_a(std::span<const double> betas, std::span<const double> a_grid, double mu) {
  Table t{"fig4", {"beta", "a", "rho_star", "rho_tilde", "status"}, {}};
  std::vector<double> tilde;
  for (double a : a_grid) {
    try {
      tilde.push_back(asymptotic_root(TradeoffWeight(a)).rho_tilde);
    } catch (const DomainError&) {
      tilde.push_back(kNaN);
    }
  }
  for (double beta : betas) {
    for (std::size_t j = 0; j < a_grid.size(); ++j) {
      try {
        const OptimResult r = welfare_optimum(beta, a_grid[j], mu);
        t.rows.push_back({beta, a_grid[j], r.rho_star, tilde[j], status_of(r)});
      } catch (const DomainError&) {
        t.rows.push_back({beta, a_grid[j], kNaN, tilde[j], std::string("domain_error")});
      }
    }
  }
  return t;
}

Table asymptote_curve(std::span<const double> a_grid) {
  Table t{"asymptote", {"a", "rho_tilde", "residual", "status"}, {}};
  for (double a : a_grid) {
    try {
      const AsymptoteResult r = asymptotic_root(TradeoffWeight(a));
      t.rows.push_back({a, r.rho_tilde, r.residual, std::string("ok")});
    } catch (const DomainError&) {
      t.rows.push_back({a, kNaN, kNaN, std::string("domain_error")});
    }
  }
  return t;
}

std::vector<Table> run_sweep(const SweepGrid& grid) {
  grid.validate();
  switch (grid.output_kind) {
    case OutputKind::objective_curve: {
      ObjectiveCurves c =
          fig1_objective_curves(grid.beta_values, TradeoffWeight(grid.a_values.front()), grid.rho_values, grid.mu);
      return {std::move(c.curves), std::move(c.argmax)};
    }
    case OutputKind::rho_star_vs_beta:
      return {fig2_rho_star_vs_beta(grid.a_values, grid.beta_values, grid.mu)};
    case OutputKind::f_star_vs_a:
      return {fig3_f_star_vs_a(grid.beta_values, grid.a_values, grid.mu)};
    case OutputKind::rho_star_vs_a:
      return {fig4_rho_star_vs_a(grid.beta_values, grid.a_values, grid.mu)};
    case OutputKind::asymptote_curve:
      return {asymptote_curve(grid.a_values)};
  }
  throw std::logic_error("unknown output kind");
}

}  // namespace aoi
