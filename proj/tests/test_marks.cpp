#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "aoristic/errors.hpp"
#include "aoristic/marks.hpp"
#include "aoristic/stats.hpp"

using namespace aoristic;

TEST_CASE("mark density: atom weight, kernel value, support") {
  const MarkLaw law = MarkLaw::with_atom_prob(0.25, PhaseDist::exponential(1.0));

  const MarkDensity atom = mark_density(law, Mark{0.0, 0.0});
  CHECK(atom.is_atom);
  CHECK(atom.weight == doctest::Approx(0.25));

  const MarkDensity cont = mark_density(law, Mark{-0.3, 1.0});
  CHECK_FALSE(cont.is_atom);
  CHECK(cont.weight == doctest::Approx(0.75));
  CHECK(cont.density == doctest::Approx(std::exp(-1.0)));

  // left endpoint to the right of the latent point: outside the support
  CHECK(mark_density(law, Mark{0.1, 1.0}).density == 0.0);

  CHECK_THROWS_AS(MarkLaw::with_atom_prob(1.5, PhaseDist::exponential(1.0)),
                  ConfigError);
}

TEST_CASE("mark law derived from a renewal cycle") {
  const RenewalSpec spec{PhaseDist::exponential(1.0),
                         PhaseDist::exponential(3.0)};
  const MarkLaw law = MarkLaw::from_renewal(spec);
  CHECK(law.p == doctest::Approx(0.25));
  CHECK(law.mean_y == doctest::Approx(1.0));
}

TEST_CASE("length-biased density values and normalisation") {
  const PhaseDist y = PhaseDist::exponential(1.0);
  CHECK(length_biased_density(y, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(length_biased_density(y, 0.0), ConfigError);

  // the length-biased Gamma(2.5, 0.07) is the Gamma(3.5, 0.07) density
  const PhaseDist g = PhaseDist::gamma(2.5, 0.07);
  const PhaseDist shifted = PhaseDist::gamma(3.5, 0.07);
  for (double l : {1.0, 10.0, 40.0, 90.0})
    CHECK(length_biased_density(g, l) ==
          doctest::Approx(shifted.pdf(l)).epsilon(1e-12));

  // Simpson integral of the exponential case over (0, 60)
  const int n = 6000;
  const double h = 60.0 / n;
  double integral = length_biased_density(y, 1e-12) * 0.0;
  for (int i = 0; i <= n; ++i) {
    const double l = std::max(i * h, 1e-12);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += w * length_biased_density(y, l);
  }
  integral *= h / 3.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("degenerate atom probability") {
  const MarkLaw law = MarkLaw::with_atom_prob(1.0, PhaseDist::exponential(1.0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) CHECK(sample_mark(law, rng).is_atom());
}

TEST_CASE("sampled lengths follow the length-biased law") {
  const MarkLaw law =
      MarkLaw::with_atom_prob(0.0, PhaseDist::gamma(2.5, 0.07));
  std::mt19937_64 rng(31);
  std::vector<double> lengths(100000);
  for (double& l : lengths) l = sample_mark(law, rng).l;
  const PhaseDist biased = PhaseDist::gamma(3.5, 0.07);
  const KsResult ks = ks_test(lengths, [&](double x) { return biased.cdf(x); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("left endpoints are uniform given the length") {
  const MarkLaw law = MarkLaw::with_atom_prob(0.0, PhaseDist::gamma(2.5, 1.0));
  std::mt19937_64 rng(37);
  std::vector<double> ratios(100000);
  for (double& v : ratios) {
    const Mark mark = sample_mark(law, rng);
    v = -mark.a / mark.l;  // uniform on (0, 1) when A | L=l ~ Unif[-l, 0]
  }
  const KsResult ks = ks_test(ratios, [](double x) { return x; });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("sampler agrees with the density: atom rate and uniform sweep") {
  const MarkLaw law = MarkLaw::with_atom_prob(0.3, PhaseDist::exponential(2.0));
  std::mt19937_64 rng(41);
  const int n = 100000;
  int atoms = 0;
  std::vector<double> lengths;
  for (int i = 0; i < n; ++i) {
    const Mark m = sample_mark(law, rng);
    if (m.is_atom()) {
      ++atoms;
    } else {
      CHECK(m.a <= 0.0);
      CHECK(m.a + m.l >= 0.0);
      lengths.push_back(m.l);
    }
  }
  CHECK(std::abs(static_cast<double>(atoms) / n - 0.3) <
        3.0 * std::sqrt(0.3 * 0.7 / n));
  const PhaseDist biased = PhaseDist::gamma(2.0, 2.0);
  const KsResult ks = ks_test(lengths, [&](double x) { return biased.cdf(x); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("uniform phase length-biased sampling matches its cdf") {
  const PhaseDist y = PhaseDist::uniform(1.0, 3.0);
  std::mt19937_64 rng(43);
  std::vector<double> ls(50000);
  for (double& l : ls) l = sample_length_biased(y, rng);
  const KsResult ks = ks_test(ls, [](double x) {
    if (x <= 1.0) return 0.0;
    if (x >= 3.0) return 1.0;
    return (x * x - 1.0) / 8.0;
  });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("marks harvested from censoring match the equilibrium sampler") {
  const RenewalSpec spec{PhaseDist::exponential(1.0),
                         PhaseDist::exponential(3.0)};
  const MarkLaw law = MarkLaw::from_renewal(spec);
  const double t = 50.0 * spec.mean_cycle();
  std::mt19937_64 rng(47);

  const int reps = 20000;
  int censored_atoms = 0;
  std::vector<double> censored_lengths;
  for (int i = 0; i < reps; ++i) {
    const RenewalTrajectory traj = simulate_trajectory(spec, t + 1e-9, rng);
    const AgeExcess ae = censor_point(t, traj);
    if (ae.is_atom)
      ++censored_atoms;
    else
      censored_lengths.push_back(ae.age + ae.excess);
  }
  int sampled_atoms = 0;
  std::vector<double> sampled_lengths;
  for (int i = 0; i < reps; ++i) {
    const Mark m = sample_mark(law, rng);
    if (m.is_atom())
      ++sampled_atoms;
    else
      sampled_lengths.push_back(m.l);
  }
  const double rate_diff =
      std::abs(censored_atoms - sampled_atoms) / static_cast<double>(reps);
  CHECK(rate_diff < 3.0 * std::sqrt(2.0 * law.p * (1.0 - law.p) / reps));

  // both length samples against the common limit law Gamma(2, 1)
  const PhaseDist biased = PhaseDist::gamma(2.0, 1.0);
  CHECK(ks_test(censored_lengths, [&](double x) { return biased.cdf(x); })
            .p_value > 0.01);
  CHECK(ks_test(sampled_lengths, [&](double x) { return biased.cdf(x); })
            .p_value > 0.01);
}
