#include "aoi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aoi/errors.hpp"
#include "aoi/format.hpp"

namespace aoi {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

void check_options(const SearchOptions& o) {
  if (!(o.domain_lo > 0.0 && o.domain_lo < o.domain_hi && o.domain_hi < 1.0)) {
    throw DomainError("search domain must satisfy 0 < lo < hi < 1");
  }
  if (o.grid_points < 3) {
    throw DomainError("grid scan needs at least 3 points");
  }
  if (!(o.tolerance > 0.0) || o.max_iterations < 1) {
    throw DomainError("tolerance and iteration budget must be positive");
  }
}

}  // namespace

OptimResult golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                    double tolerance, int max_iterations) {
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (hi - lo > tolerance && it < max_iterations) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
    ++it;
  }

  OptimResult result;
  result.rho_star = 0.5 * (lo + hi);
  result.objective_at_star = f(result.rho_star);
  result.iterations = it;
  result.converged = (hi - lo) <= tolerance;
  result.bracket = {lo, hi};
  return result;
}

OptimResult grid_then_golden_maximize(const std::function<double(double)>& f,
                                      const SearchOptions& options) {
  check_options(options);
  const int n = options.grid_points;
  const double step = (options.domain_hi - options.domain_lo) / (n - 1);
  auto grid = [&](int i) { return i == n - 1 ? options.domain_hi : options.domain_lo + i * step; };

  int best = 0;
  double best_value = f(grid(0));
  for (int i = 1; i < n; ++i) {
    const double v = f(grid(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  const double lo = grid(std::max(best - 1, 0));
  const double hi = grid(std::min(best + 1, n - 1));
  OptimResult result = golden_section_maximize(f, lo, hi, options.tolerance, options.max_iterations);
  // Never report a point worse than the best grid sample.
  if (result.objective_at_star < best_value) {
    result.rho_star = grid(best);
    result.objective_at_star = best_value;
  }
  return result;
}

OptimResult minimize_aoi(double mu, const SearchOptions& options) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("service rate must be positive and finite, got " + format_double(mu));
  }
  // The minimizer does not depend on mu; search the normalized curve.
  OptimResult result = grid_then_golden_maximize(
      [](double rho) { return -normalized_aoi_mm1(rho); }, options);
  result.objective_at_star = avg_aoi_mm1(result.rho_star, mu);
  return result;
}

OptimResult maximize_objective(double beta, TradeoffWeight w, double mu,
                               const SearchOptions& options) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("capture probability must lie in [0,1], got " + format_double(beta));
  }
  if (beta == 0.0) {
    return minimize_aoi(mu, options);
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("service rate must be positive and finite, got " + format_double(mu));
  }
  // log f is a monotone transform of f and stays finite for large a.
  OptimResult result = grid_then_golden_maximize(
      [&](double rho) { return log_bergson_objective(SystemParams::from_load(rho, 1.0, beta), w); },
      options);
  result.objective_at_star = bergson_objective(SystemParams::from_load(result.rho_star, mu, beta), w);
  return result;
}

double asymptotic_polynomial(double rho, TradeoffWeight w) {
  const double a = w.a();
  // (a+2) rho^4 - 2(a+2) rho^3 + (a+2) rho^2 - (2a+1) rho + a
  return (((((a + 2.0) * rho - 2.0 * (a + 2.0)) * rho + (a + 2.0)) * rho - (2.0 * a + 1.0)) * rho) + a;
}

double asymptotic_polynomial_derivative(double rho, TradeoffWeight w) {
  const double a = w.a();
  return 2.0 * rho * (a + 2.0) * (rho - 1.0) * (2.0 * rho - 1.0) - 2.0 * a - 1.0;
}

double asymptotic_residual_bound(TradeoffWeight w, double width) {
  // |g'| <= 2.2a + 1.4 on [0,1]; the bisection midpoint is within width/2 of the root.
  return (3.0 * w.a() + 2.0) * width;
}

AsymptoteResult asymptotic_root(TradeoffWeight w, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw DomainError("root tolerance must be positive");
  }
  // g(0) = a > 0 and g(1) = -(a+1) < 0.
  double lo = 0.0;
  double hi = 1.0;
  double mid = 0.5;
  while (hi - lo > tolerance) {
    mid = 0.5 * (lo + hi);
    const double g = asymptotic_polynomial(mid, w);
    if (g == 0.0) {
      lo = hi = mid;
      break;
    }
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  mid = 0.5 * (lo + hi);
  return {mid, asymptotic_polynomial(mid, w)};
}

}  // namespace aoi
