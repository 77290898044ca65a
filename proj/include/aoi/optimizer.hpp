#pragma once

#include <functional>
#include <utility>

#include "aoi/core.hpp"

namespace aoi {

/// Optimal load factor and the search that produced it.
struct OptimResult {
  double rho_star = 0.0;
  double objective_at_star = 0.0;
  int iterations = 0;
  bool converged = false;
  std::pair<double, double> bracket{0.0, 0.0};
};

struct AsymptoteResult {
  double rho_tilde = 0.0;
  double residual = 0.0;  // g(rho_tilde)
};

struct SearchOptions {
  double domain_lo = 1e-6;
  double domain_hi = 1.0 - 1e-6;
  int grid_points = 1000;
  double tolerance = 1e-9;  // final bracket width
  int max_iterations = 200;
};

/// Golden-section maximization of a unimodal function on [lo, hi]. The
/// returned bracket always contains rho_star; objective_at_star is f(rho_star).
OptimResult golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                    double tolerance, int max_iterations);

/// Scans `options.grid_points` evenly spaced points, then refines the best
/// grid cell and its neighbours with golden-section search.
OptimResult grid_then_golden_maximize(const std::function<double(double)>& f,
                                      const SearchOptions& options = {});

/// Load minimizing avg_aoi_mm1(., mu); objective_at_star is the minimal AoI.
OptimResult minimize_aoi(double mu, const SearchOptions& options = {});

/// Load maximizing the welfare objective. beta == 0 has no eavesdropper and
/// falls back to minimize_aoi(mu). objective_at_star is f(rho_star) at the
/// given mu.
OptimResult maximize_objective(double beta, TradeoffWeight w, double mu,
                               const SearchOptions& options = {});

/// g(rho) = (a+2)(rho^4 - 2rho^3 + rho^2) - (2a+1)rho + a, the numerator
/// of the objective's derivative as beta -> 0+.
double asymptotic_polynomial(double rho, TradeoffWeight w);

/// g'(rho) = 2rho(a+2)(rho-1)(2rho-1) - 2a - 1, negative on (0,1).
double asymptotic_polynomial_derivative(double rho, TradeoffWeight w);

/// Bound on |g| at a bisection root whose final bracket is `width` wide.
double asymptotic_residual_bound(TradeoffWeight w, double width = 1e-10);

/// Unique root of g on (0,1): the optimal load in the limit beta -> 0+.
AsymptoteResult asymptotic_root(TradeoffWeight w, double tolerance = 1e-10);

}  // namespace aoi
