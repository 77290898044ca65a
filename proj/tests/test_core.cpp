#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "aoi/core.hpp"
#include "aoi/errors.hpp"
#include "doctest.h"

using namespace aoi;

TEST_CASE("avg_aoi_mm1 closed form") {
  // 1 + 1/0.5 + 0.25/0.5
  CHECK(avg_aoi_mm1(0.5, 1.0) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(avg_aoi_mm1(0.5, 2.0) == doctest::Approx(1.75).epsilon(1e-15));
  // 1 + 4 + 0.0625/0.75
  CHECK(avg_aoi_mm1(0.25, 1.0) == doctest::Approx(5.0 + 1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("avg_aoi_mm1 diverges at both ends of the load range") {
  CHECK(avg_aoi_mm1(1e-9, 1.0) > 1e8);
  CHECK(avg_aoi_mm1(1.0 - 1e-9, 1.0) > 1e8);
}

TEST_CASE("avg_aoi_mm1 rejects loads and rates outside the domain") {
  CHECK_THROWS_AS(avg_aoi_mm1(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(avg_aoi_mm1(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(avg_aoi_mm1(-0.2, 1.0), DomainError);
  CHECK_THROWS_AS(avg_aoi_mm1(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(avg_aoi_mm1(0.5, -1.0), DomainError);
  CHECK_THROWS_AS(avg_aoi_mm1(std::nan(""), 1.0), DomainError);
}

TEST_CASE("SystemParams validation") {
  CHECK_NOTHROW(SystemParams(0.5, 1.0, 0.0));
  CHECK_NOTHROW(SystemParams(0.5, 1.0, 1.0));
  CHECK_THROWS_AS(SystemParams(1.0, 1.0, 0.5), DomainError);  // rho = 1
  CHECK_THROWS_AS(SystemParams(2.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(SystemParams(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(SystemParams(0.5, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(SystemParams(0.5, 1.0, -0.1), DomainError);
  CHECK_THROWS_AS(SystemParams(0.5, 1.0, 1.1), DomainError);

  const SystemParams p(1.0, 4.0, 0.5);
  CHECK(p.rho() == 0.25);
  CHECK(p.eve_rho() == 0.125);
  const SystemParams q = SystemParams::from_load(0.3, 7.0, 0.2);
  CHECK(q.rho() == 0.3);
  CHECK(q.lambda() == doctest::Approx(2.1));
}

TEST_CASE("TradeoffWeight must be positive") {
  CHECK_NOTHROW(TradeoffWeight(1e-12));
  CHECK_THROWS_AS(TradeoffWeight(0.0), DomainError);
  CHECK_THROWS_AS(TradeoffWeight(-1.0), DomainError);
  CHECK_THROWS_AS(TradeoffWeight(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("aoi_pair") {
  SUBCASE("beta = 1 makes the channels identical") {
    const AoiPair p = aoi_pair(SystemParams::from_load(0.5, 1.0, 1.0));
    CHECK(p.delta_b == 3.5);
    CHECK(p.delta_e == 3.5);
  }
  SUBCASE("beta = 0.5") {
    const AoiPair p = aoi_pair(SystemParams::from_load(0.5, 1.0, 0.5));
    CHECK(p.delta_b == doctest::Approx(3.5));
    CHECK(p.delta_e == doctest::Approx(5.0833333333333333).epsilon(1e-14));
  }
  SUBCASE("beta = 0 leaves Eve with infinite age") {
    const AoiPair p = aoi_pair(SystemParams::from_load(0.5, 1.0, 0.0));
    CHECK(p.delta_b == doctest::Approx(3.5));
    CHECK(std::isinf(p.delta_e));
    CHECK(p.delta_e > 0);
  }
}

TEST_CASE("utilities") {
  auto [u1, u2] = utilities(SystemParams::from_load(0.5, 1.0, 0.5));
  CHECK(u1 == doctest::Approx(1.0 / 3.5));
  CHECK(u2 == doctest::Approx(5.0833333333333333));
  std::tie(u1, u2) = utilities(SystemParams::from_load(0.5, 1.0, 1.0));
  CHECK(u1 == doctest::Approx(1.0 / 3.5));
  CHECK(u2 == doctest::Approx(3.5));
  std::tie(u1, u2) = utilities(SystemParams::from_load(0.5, 1.0, 0.0));
  CHECK(u1 == doctest::Approx(1.0 / 3.5));
  CHECK(std::isinf(u2));
}

TEST_CASE("bergson_objective") {
  CHECK(bergson_objective(SystemParams::from_load(0.5, 1.0, 1.0), TradeoffWeight(1.0)) ==
        doctest::Approx(1.0 / 3.5).epsilon(1e-13));
  CHECK(bergson_objective(SystemParams::from_load(0.5, 1.0, 1.0), TradeoffWeight(1e-12)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bergson_objective(SystemParams::from_load(0.5, 1.0, 0.5), TradeoffWeight(1.0)) ==
        doctest::Approx((5.0 + 1.0 / 12.0) / (3.5 * 3.5)).epsilon(1e-13));
  CHECK(bergson_objective(SystemParams::from_load(0.5, 1.0, 0.5), TradeoffWeight(1.0)) ==
        doctest::Approx(0.41497).epsilon(1e-5));
  CHECK_THROWS_AS(bergson_objective(SystemParams::from_load(0.5, 1.0, 0.0), TradeoffWeight(1.0)), DomainError);
}

TEST_CASE("bergson_objective stays finite for large a") {
  // delta_b^(a+1) alone overflows a double here.
  const SystemParams p = SystemParams::from_load(1e-3, 1.0, 0.5);
  CHECK(std::isinf(std::pow(avg_aoi_mm1(1e-3, 1.0), 200.0)));
  const double log_f = log_bergson_objective(p, TradeoffWeight(200.0));
  CHECK(std::isfinite(log_f));
  CHECK(log_f == doctest::Approx(std::log(avg_aoi_mm1(5e-4, 1.0)) - 201.0 * std::log(avg_aoi_mm1(1e-3, 1.0))));
}

TEST_CASE("property: composition identity and beta = 1 degeneracy") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
  std::uniform_real_distribution<double> log_mu(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const double rho = unit(rng);
    const double beta = unit(rng);
    const double mu = std::pow(10.0, log_mu(rng));
    const SystemParams p = SystemParams::from_load(rho, mu, beta);
    REQUIRE(aoi_pair(p).delta_e == avg_aoi_mm1(beta * rho, mu));
    const AoiPair same = aoi_pair(SystemParams::from_load(rho, mu, 1.0));
    REQUIRE(same.delta_e == same.delta_b);
  }
}

TEST_CASE("property: scale law in mu") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
  std::uniform_real_distribution<double> log_mu(-4.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const double rho = unit(rng);
    const double mu = std::pow(10.0, log_mu(rng));
    const double scaled = avg_aoi_mm1(rho, mu);
    const double reference = avg_aoi_mm1(rho, 1.0) / mu;
    REQUIRE(std::abs(scaled - reference) <= 1e-12 * reference);
  }
}

TEST_CASE("property: AoI is bounded below by two service times") {
  for (int i = 1; i < 10000; ++i) {
    const double rho = i / 10000.0;
    REQUIRE(avg_aoi_mm1(rho, 2.5) >= 2.0 / 2.5);
  }
}

TEST_CASE("property: objective vanishes as rho -> 1") {
  for (double a : {1.0, 2.0, 5.0, 10.0}) {
    for (double beta : {0.2, 0.5, 1.0}) {
      CHECK(bergson_objective(SystemParams::from_load(1.0 - 1e-6, 1.0, beta), TradeoffWeight(a)) < 1e-3);
    }
  }
}

TEST_CASE("property: objective is positive and finite on a grid") {
  for (int i = 1; i < 50; ++i) {
    const double rho = i / 50.0;
    for (int j = 1; j <= 20; ++j) {
      const double beta = j / 20.0;
      for (int k = 1; k <= 20; ++k) {
        const double a = k / 2.0;
        const double f = bergson_objective(SystemParams::from_load(rho, 1.0, beta), TradeoffWeight(a));
        REQUIRE(f > 0.0);
        REQUIRE(std::isfinite(f));
      }
    }
  }
}
