#pragma once

// Closed-form average Age of Information for FCFS M/M/1 queues and the
// weighted-product welfare objective trading Bob's freshness against Eve's.
//
// Everything here is a pure function of its arguments.

#include <utility>

namespace aoi {

/// Physical scenario: Alice's update rate, the common service rate of Bob's
/// and Eve's queues, and the per-packet capture probability.
class SystemParams {
public:
  /// Throws DomainError unless lambda > 0, mu > 0, lambda/mu < 1, beta in [0,1].
  SystemParams(double lambda, double mu, double beta);

  /// Builds the scenario from the offered load rho = lambda/mu.
  static SystemParams from_load(double rho, double mu, double beta);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double beta() const { return beta_; }
  double rho() const { return rho_; }
  /// Offered load on Eve's queue, beta * rho.
  double eve_rho() const { return beta_ * rho_; }

private:
  SystemParams(double lambda, double mu, double beta, double rho);

  double lambda_;
  double mu_;
  double beta_;
  double rho_;
};

/// Exponent weight a of the welfare objective. Must be strictly positive.
class TradeoffWeight {
public:
  explicit TradeoffWeight(double a);
  double a() const { return a_; }

private:
  double a_;
};

struct AoiPair {
  double delta_b;
  double delta_e;  // +inf when beta == 0
};

/// Average AoI of an FCFS M/M/1 queue at load rho, normalized to mu = 1:
/// 1 + 1/rho + rho^2/(1 - rho).
double normalized_aoi_mm1(double rho);

/// (1/mu) * normalized_aoi_mm1(rho). Throws DomainError outside 0 < rho < 1, mu > 0.
double avg_aoi_mm1(double rho, double mu);

/// Bob's and Eve's average AoI. Eve's queue is an independent M/M/1 at load
/// beta*rho, so delta_e == avg_aoi_mm1(beta*rho, mu).
AoiPair aoi_pair(const SystemParams& params);

/// u1 = 1/delta_b (Bob's freshness), u2 = delta_e (Eve's staleness).
std::pair<double, double> utilities(const SystemParams& params);

/// log f = log(delta_e) - (a+1) log(delta_b). Throws DomainError if beta == 0.
double log_bergson_objective(const SystemParams& params, TradeoffWeight w);

/// f = delta_e / delta_b^(a+1), evaluated through the log form so large a
/// does not overflow. Throws DomainError if beta == 0.
double bergson_objective(const SystemParams& params, TradeoffWeight w);

}  // namespace aoi
