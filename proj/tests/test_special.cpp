#include <doctest.h>

#include <cmath>
#include <random>

#include "kppsym/errors.hpp"
#include "kppsym/special_functions.hpp"
#include "support/oracles.hpp"

using namespace kppsym;

TEST_CASE("erf against the high-precision series") {
  double worst = 0.0;
  for (int i = -600; i <= 600; ++i) {
    double x = i / 100.0;
    worst = std::max(worst, std::fabs(special::erf(x) - oracle::erf_series(x)));
  }
  CHECK(worst < 1e-12);
  CHECK(special::erf(0.0) == 0.0);
  CHECK(std::fabs(special::erf(1.0) - 0.842700792949715) < 1e-12);
}

TEST_CASE("erf is odd and bounded") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-8, 8);
  for (int i = 0; i < 10000; ++i) {
    double x = d(rng);
    double y = special::erf(x);
    CHECK(special::erf(-x) == -y);
    CHECK(std::fabs(y) <= 1.0);
    if (std::fabs(x) < 5.0) CHECK(std::fabs(y) < 1.0);
  }
}

TEST_CASE("lambert W principal branch") {
  CHECK(special::lambert_w(0.0) == 0.0);
  CHECK(special::lambert_w(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(special::lambert_w(-std::exp(-1.0)) == -1.0);
  CHECK_THROWS_AS(special::lambert_w(-0.5), DomainError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logz(-6, std::log(1000.0));
  std::uniform_real_distribution<double> neg(-std::exp(-1.0) + 1e-6, 0.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double z = (i % 2) ? std::exp(logz(rng)) : neg(rng);
    double w = special::lambert_w(z);
    CHECK(w >= -1.0);
    worst = std::max(worst, std::fabs(w * std::exp(w) - z) / std::max(std::fabs(z), 1e-300));
  }
  CHECK(worst < 1e-12);
}
