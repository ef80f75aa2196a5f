#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "krglm/error.hpp"
#include "krglm/family.hpp"

using namespace krglm;

namespace {
constexpr Family kAll[] = {Family::Gaussian, Family::Logistic, Family::Poisson};
}

TEST_CASE("log_partition matches the closed forms") {
  CHECK(log_partition(Family::Logistic, 0.0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(log_partition(Family::Gaussian, 3.0) == 4.5);
  CHECK(log_partition(Family::Poisson, 0.0) == 1.0);
  // overflow-safe branch
  CHECK(log_partition(Family::Logistic, 800.0) == doctest::Approx(800.0));
  CHECK(std::isfinite(log_partition(Family::Logistic, -800.0)));
  CHECK_THROWS_AS(log_partition(Family::Gaussian, std::numeric_limits<double>::quiet_NaN()),
                  DomainError);
  CHECK_THROWS_AS(log_partition(Family::Logistic, INFINITY), DomainError);
}

TEST_CASE("mean is the derivative of the log-partition") {
  CHECK(mean(Family::Logistic, 0.0) == 0.5);
  CHECK(mean(Family::Gaussian, -2.5) == -2.5);
  // 1 / (1 + e^-2) evaluated at 30 digits
  CHECK(mean(Family::Logistic, 2.0) == doctest::Approx(0.880797077977882444).epsilon(1e-15));
  CHECK(mean(Family::Logistic, 30.0) < 1.0);
  CHECK(mean(Family::Logistic, -40.0) > 0.0);
  CHECK_THROWS_AS(mean(Family::Poisson, 50.5), DomainError);
  CHECK_NOTHROW(mean(Family::Poisson, 50.0));
}

TEST_CASE("variance values and bounds") {
  CHECK(variance(Family::Logistic, 0.0) == 0.25);
  CHECK(variance(Family::Gaussian, 17.0) == 1.0);
  CHECK(variance(Family::Poisson, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(variance(Family::Logistic, 700.0) > 0.0);
  CHECK_THROWS_AS(variance(Family::Poisson, 60.0), DomainError);
}

TEST_CASE("finite differences agree with mean and variance on [-10, 10]") {
  const double h = 1e-5;
  for (Family f : kAll) {
    for (int k = 0; k <= 400; ++k) {
      const double u = -10.0 + 0.05 * k;
      const double fd_mean = (log_partition(f, u + h) - log_partition(f, u - h)) / (2 * h);
      const double fd_var = (mean(f, u + h) - mean(f, u - h)) / (2 * h);
      CHECK(std::abs(mean(f, u) - fd_mean) <= 1e-6 * (1 + std::abs(mean(f, u))));
      CHECK(std::abs(variance(f, u) - fd_var) <= 1e-6 * (1 + std::abs(variance(f, u))));
    }
  }
}

TEST_CASE("bregman divergence") {
  CHECK(bregman(Family::Gaussian, 3.0, 1.0) == 2.0);
  CHECK(bregman(Family::Poisson, 1.0, 0.0) ==
        doctest::Approx(0.718281828459045235).epsilon(1e-14));
  for (double u : {-7.0, -0.3, 0.0, 2.5, 9.0}) CHECK(bregman(Family::Logistic, u, u) == 0.0);

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  for (int t = 0; t < 10000; ++t) {
    const double u = unif(gen), v = unif(gen);
    for (Family f : kAll) {
      CHECK(bregman(f, u, v) >= 0.0);
      CHECK(bregman(f, u, u) <= 1e-12);
    }
    CHECK(bregman(Family::Gaussian, u, v) == 0.5 * (u - v) * (u - v));
    CHECK(variance(Family::Logistic, u) <= 0.25 + 1e-12);
  }
}

TEST_CASE("irls_step_terms") {
  const auto g = irls_step_terms(Family::Gaussian, 0.7, -1.3);
  CHECK(g.weight == 1.0);
  CHECK(g.pseudo_response == doctest::Approx(-1.3).epsilon(1e-15));

  const auto l = irls_step_terms(Family::Logistic, 0.0, 1.0);
  CHECK(l.weight == 0.25);
  CHECK(l.pseudo_response == 2.0);

  const auto p = irls_step_terms(Family::Poisson, 0.0, 3.0);
  CHECK(p.weight == 1.0);
  CHECK(p.pseudo_response == 2.0);

  // saturated logistic score: weight clipped to the floor
  const auto sat = irls_step_terms(Family::Logistic, 40.0, 0.0);
  CHECK(sat.weight == kWeightFloor);
  CHECK(std::isfinite(sat.pseudo_response));

  CHECK_THROWS_AS(irls_step_terms(Family::Logistic, 0.0, 1.5), DomainError);
  CHECK_THROWS_AS(irls_step_terms(Family::Poisson, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(irls_step_terms(Family::Gaussian, 0.0, NAN), DomainError);
}

TEST_CASE("family names round-trip") {
  for (Family f : kAll) CHECK(parse_family(family_name(f)) == f);
  CHECK_THROWS_AS(parse_family("binomial"), InputError);
}
