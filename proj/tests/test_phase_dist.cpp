#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "aoristic/errors.hpp"
#include "aoristic/phase_dist.hpp"

using namespace aoristic;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(PhaseDist::exponential(0.0), ConfigError);
  CHECK_THROWS_AS(PhaseDist::exponential(-1.0), ConfigError);
  CHECK_THROWS_AS(PhaseDist::gamma(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(PhaseDist::gamma(1.0, -2.0), ConfigError);
  CHECK_THROWS_AS(PhaseDist::uniform(-0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(PhaseDist::uniform(1.0, 1.0), ConfigError);
}

TEST_CASE("means") {
  CHECK(PhaseDist::exponential(2.0).mean() == doctest::Approx(0.5));
  CHECK(PhaseDist::gamma(2.5, 0.07).mean() == doctest::Approx(2.5 / 0.07));
  CHECK(PhaseDist::uniform(1.0, 3.0).mean() == doctest::Approx(2.0));
}

TEST_CASE("pdf and cdf hand values") {
  const PhaseDist e = PhaseDist::exponential(1.0);
  CHECK(e.pdf(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(e.cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(e.cdf(0.0) == 0.0);
  CHECK(e.cdf(std::numeric_limits<double>::infinity()) == 1.0);

  // Gamma(2,1) density x e^{-x}
  const PhaseDist g = PhaseDist::gamma(2.0, 1.0);
  CHECK(g.pdf(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(g.cdf(std::numeric_limits<double>::infinity()) == 1.0);
  // P(Gamma(2,1) <= 1) = 1 - 2 e^{-1}
  CHECK(g.cdf(1.0) == doctest::Approx(1.0 - 2.0 * std::exp(-1.0)));

  const PhaseDist u = PhaseDist::uniform(1.0, 3.0);
  CHECK(u.pdf(2.0) == doctest::Approx(0.5));
  CHECK(u.pdf(0.5) == 0.0);
  CHECK(u.cdf(2.0) == doctest::Approx(0.5));
}

TEST_CASE("sampling matches the first two moments") {
  std::mt19937_64 rng(7);
  for (const PhaseDist& d :
       {PhaseDist::exponential(0.7), PhaseDist::gamma(2.5, 0.07),
        PhaseDist::uniform(0.5, 2.5)}) {
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = d.sample(rng);
      CHECK(x >= 0.0);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - d.mean()) < 4.0 * se);
  }
}

TEST_CASE("fixed seed reproduces draws") {
  const PhaseDist d = PhaseDist::gamma(2.0, 3.0);
  std::mt19937_64 a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(d.sample(a) == d.sample(b));
}
