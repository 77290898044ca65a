#include "aoi/core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "aoi/errors.hpp"
#include "aoi/format.hpp"

namespace aoi {
namespace {

void check_scenario(double lambda, double mu, double beta, double rho) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("arrival rate must be positive and finite, got " + format_double(lambda));
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("service rate must be positive and finite, got " + format_double(mu));
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("offered load must lie in (0,1), got " + format_double(rho));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("capture probability must lie in [0,1], got " + format_double(beta));
  }
}

}  // namespace

SystemParams::SystemParams(double lambda, double mu, double beta)
    : SystemParams(lambda, mu, beta, lambda / mu) {}

SystemParams::SystemParams(double lambda, double mu, double beta, double rho)
    : lambda_(lambda), mu_(mu), beta_(beta), rho_(rho) {
  check_scenario(lambda_, mu_, beta_, rho_);
}

SystemParams SystemParams::from_load(double rho, double mu, double beta) {
  return SystemParams(rho * mu, mu, beta, rho);
}

TradeoffWeight::TradeoffWeight(double a) : a_(a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("trade-off weight a must be positive and finite, got " + format_double(a));
  }
}

double normalized_aoi_mm1(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("offered load must lie in (0,1), got " + format_double(rho));
  }
  return 1.0 + 1.0 / rho + rho * rho / (1.0 - rho);
}

double avg_aoi_mm1(double rho, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("service rate must be positive and finite, got " + format_double(mu));
  }
  return normalized_aoi_mm1(rho) / mu;
}

AoiPair aoi_pair(const SystemParams& params) {
  const double delta_b = avg_aoi_mm1(params.rho(), params.mu());
  if (params.beta() == 0.0) {
    return {delta_b, std::numeric_limits<double>::infinity()};
  }
  return {delta_b, avg_aoi_mm1(params.eve_rho(), params.mu())};
}

std::pair<double, double> utilities(const SystemParams& params) {
  const AoiPair pair = aoi_pair(params);
  return {1.0 / pair.delta_b, pair.delta_e};
}

double log_bergson_objective(const SystemParams& params, TradeoffWeight w) {
  if (params.beta() == 0.0) {
    throw DomainError("objective is unbounded without an eavesdropper (beta == 0)");
  }
  const AoiPair pair = aoi_pair(params);
  return std::log(pair.delta_e) - (w.a() + 1.0) * std::log(pair.delta_b);
}

double bergson_objective(const SystemParams& params, TradeoffWeight w) {
  return std::exp(log_bergson_objective(params, w));
}

}  // namespace aoi
