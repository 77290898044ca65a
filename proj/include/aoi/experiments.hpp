#pragma once

// Parameter sweeps behind the objective-curve, optimal-load and
// optimal-value figures, emitted as plain tables.

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aoi/core.hpp"

namespace aoi {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// A named, rectangular table. Every row has one cell per column; rows whose
/// computation failed carry a non-"ok" value in the `status` column.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(const std::string& column) const;
  double number(std::size_t row, const std::string& column) const;
  const std::string& text(std::size_t row, const std::string& column) const;
};

/// RFC 4180: header row, CRLF line breaks, quoting where required.
void write_csv(const Table& table, std::ostream& out);

/// One JSON object per row, keys in column order. Non-finite numbers are null.
void write_jsonl(const Table& table, std::ostream& out);

enum class OutputKind { objective_curve, rho_star_vs_beta, f_star_vs_a, rho_star_vs_a, asymptote_curve };

std::string figure_id(OutputKind kind);
OutputKind parse_output_kind(const std::string& figure);

struct SweepGrid {
  std::vector<double> rho_values;
  std::vector<double> beta_values;
  std::vector<double> a_values;
  double mu = 1.0;
  OutputKind output_kind = OutputKind::objective_curve;

  /// Throws DomainError if an axis used by `output_kind` is empty, not
  /// strictly increasing, or leaves its domain.
  void validate() const;

  /// 16 hex digits of FNV-1a over the canonical grid text.
  std::string hash() const;

  /// `<figure_id>_<hash>.csv`
  std::string file_name(const std::string& extension = "csv") const;
};

/// min, min+step, ... up to max (inclusive within rounding).
std::vector<double> linear_grid(double min, double max, double step);
/// `points` values evenly spaced in log10 between min and max inclusive.
std::vector<double> log_grid(double min, double max, int points);

/// rho in [0.01, 0.99] step 0.005; beta in {0.05, ..., 1.0}; a log-spaced
/// over [1e-4, 1e2] with 50 points (a = {1} for the objective curves).
SweepGrid default_grid(OutputKind kind);

struct ObjectiveCurves {
  Table curves;  // beta, rho, f, status
  Table argmax;  // beta, rho_grid_argmax, f_grid_max, rho_star, f_star, status
};

ObjectiveCurves fig1_objective_curves(std::span<const double> betas, TradeoffWeight w,
                                      std::span<const double> rho_grid, double mu = 1.0);

/// a, beta, rho_star, f_star, converged, below_ceiling, status
Table fig2_rho_star_vs_beta(std::span<const double> a_list, std::span<const double> beta_grid,
                            double mu = 1.0);

/// beta, a, rho_star, f_star, status
Table fig3_f_star_vs_a(std::span<const double> betas, std::span<const double> a_grid, double mu = 1.0);

/// beta, a, rho_star, rho_tilde, status
Table fig4_rho_star_vs_a(std::span<const double> betas, std::span<const double> a_grid, double mu = 1.0);

/// a, rho_tilde, residual, status
Table asymptote_curve(std::span<const double> a_grid);

/// Validates the grid and evaluates the figure it names.
std::vector<Table> run_sweep(const SweepGrid& grid);

}  // namespace aoi
