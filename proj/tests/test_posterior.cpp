#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "aoristic/errors.hpp"
#include "aoristic/posterior.hpp"
#include "aoristic/prior.hpp"
#include "aoristic/stats.hpp"

using namespace aoristic;

namespace {

ObservedData toy_data() {
  ObservedData data;
  data.window = Window{0.0, 1.0};
  data.atoms = {0.51, 0.58};
  data.intervals = {IntervalCensored{0.45, 0.4}};
  return data;
}

LogPriorDensity area_prior(const AreaInteractionParams& params) {
  return [params](const std::vector<double>& pts) {
    return log_density_unnorm(params, PointPattern(pts));
  };
}

// brute-force assignment count over all permutations
std::uint64_t count_by_enumeration(const std::vector<double>& points,
                                   const std::vector<IntervalCensored>& ivs) {
  std::vector<int> perm(points.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < ivs.size() && ok; ++i)
      ok = ivs[i].contains(points[static_cast<std::size_t>(
          perm[i])]);
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace

TEST_CASE("assignment counting on small instances") {
  const std::vector<double> pts{0.5, 0.6};
  const std::vector<IntervalCensored> ivs{{0.0, 1.0}, {0.55, 0.45}};
  CHECK(count_valid_assignments(pts, ivs) == 1);

  const std::vector<IntervalCensored> wide{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(count_valid_assignments(pts, wide) == 2);

  CHECK(count_valid_assignments({}, {}) == 1);

  std::vector<double> too_many(21, 0.0);
  std::vector<IntervalCensored> too_many_ivs(21, IntervalCensored{0.0, 1.0});
  CHECK_THROWS_AS(count_valid_assignments(too_many, too_many_ivs),
                  ConfigError);
}

TEST_CASE("assignment counting equals brute-force enumeration") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 5;
    std::vector<double> pts(k);
    for (double& p : pts) p = unif(rng);
    std::vector<IntervalCensored> ivs(k);
    for (auto& iv : ivs) {
      const double a = unif(rng) * 0.8;
      iv = IntervalCensored{a, 0.05 + 0.6 * unif(rng)};
    }
    CHECK(count_valid_assignments(pts, ivs) == count_by_enumeration(pts, ivs));
  }
}

TEST_CASE("assignment counting matches enumeration on a dense instance") {
  // every point fits every interval: k! bijections
  std::vector<double> pts{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<IntervalCensored> ivs(6, IntervalCensored{0.0, 1.0});
  CHECK(count_valid_assignments(pts, ivs) == 720);
}

TEST_CASE("assignment distribution is uniform over valid bijections") {
  const std::vector<double> pts{0.5, 0.6};
  const std::vector<IntervalCensored> only_one{{0.0, 1.0}, {0.55, 0.45}};
  const AssignmentDistribution single = assignment_distribution(pts, only_one);
  CHECK(single.assignments.size() == 1);
  CHECK(single.probability == 1.0);
  CHECK(single.assignments[0] == std::vector<int>{0, 1});

  const std::vector<IntervalCensored> wide{{0.0, 1.0}, {0.0, 1.0}};
  const AssignmentDistribution pair = assignment_distribution(pts, wide);
  CHECK(pair.assignments.size() == 2);
  CHECK(pair.probability == doctest::Approx(0.5));

  const std::vector<IntervalCensored> misses{{0.9, 0.05}, {0.9, 0.05}};
  CHECK_THROWS_AS(assignment_distribution(pts, misses), DataError);
}

TEST_CASE("uniform sampling of assignments matches 1/count") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // k = 4 instance with several valid bijections
  const std::vector<double> pts{0.2, 0.4, 0.6, 0.8};
  const std::vector<IntervalCensored> ivs{
      {0.0, 0.7}, {0.1, 0.6}, {0.3, 0.6}, {0.5, 0.45}};
  const AssignmentDistribution dist = assignment_distribution(pts, ivs);
  CHECK(dist.assignments.size() ==
        count_valid_assignments(pts, ivs));
  const int n = 20000;
  std::vector<int> hits(dist.assignments.size(), 0);
  for (int i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(
        unif(rng) * static_cast<double>(dist.assignments.size()));
    ++hits[j];
  }
  for (int h : hits) {
    const double freq = static_cast<double>(h) / n;
    CHECK(std::abs(freq - dist.probability) <
          3.0 * std::sqrt(dist.probability * (1.0 - dist.probability) / n));
  }
}

TEST_CASE("log posterior: support failures and the Poisson factorisation") {
  const ObservedData data = toy_data();
  AreaInteractionParams poisson{7.0, 0.0, 0.05, data.window};
  const LogPriorDensity prior = area_prior(poisson);

  // inside the interval
  const std::vector<double> good{0.6};
  const double lp = log_posterior_unnorm(data, good, prior);
  // n log(beta) + log(count = 1)
  CHECK(lp == doctest::Approx(3.0 * std::log(7.0)));

  const std::vector<double> outside{0.2};
  CHECK(log_posterior_unnorm(data, outside, prior) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("acceptance probability helper") {
  CHECK(mh_acceptance_probability(0.0) == 1.0);
  CHECK(mh_acceptance_probability(2.0) == 1.0);
  CHECK(mh_acceptance_probability(-1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("toy posterior is uniform for the Poisson prior, acceptance exactly one") {
  const ObservedData data = toy_data();
  AreaInteractionParams poisson{12.0, 0.0, 0.1, data.window};
  MhConfig cfg;
  cfg.burnin = 2000;
  cfg.sweeps = 30000;
  std::mt19937_64 rng(107);
  const PosteriorSample sample =
      mh_state_estimation(data, area_prior(poisson), cfg, rng);
  CHECK(sample.accepted == sample.proposed);
  CHECK(sample.states.size() == 30000);

  std::vector<double> xs;
  for (const auto& s : sample.states) xs.push_back(s[0]);
  const KsResult ks = ks_test(
      xs, [](double x) { return std::clamp((x - 0.45) / 0.4, 0.0, 1.0); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("toy posterior shifts with the interaction sign") {
  const ObservedData data = toy_data();
  MhConfig cfg;
  cfg.burnin = 5000;
  cfg.sweeps = 50000;

  auto posterior_mean = [&](double eta, std::uint64_t seed) {
    AreaInteractionParams params{12.0, eta, 0.1, data.window};
    std::mt19937_64 rng(seed);
    const PosteriorSample sample =
        mh_state_estimation(data, area_prior(params), cfg, rng);
    std::vector<double> xs;
    for (const auto& s : sample.states) xs.push_back(s[0]);
    return batch_means(xs);
  };

  const BatchMeans attract = posterior_mean(1.2, 109);
  CHECK(attract.mean + 3.0 * attract.se < 0.65);
  const BatchMeans repel = posterior_mean(-1.2, 113);
  CHECK(repel.mean - 3.0 * repel.se > 0.65);
}

TEST_CASE("chain states stay inside the censoring intervals") {
  ObservedData data;
  data.window = Window{0.0, 1.0};
  data.atoms = {0.15};
  data.intervals = {IntervalCensored{-0.2, 0.5}, IntervalCensored{0.4, 0.7}};
  AreaInteractionParams params{12.0, 1.2, 0.08, data.window};
  MhConfig cfg;
  cfg.burnin = 1000;
  cfg.sweeps = 20000;
  std::mt19937_64 rng(127);
  const PosteriorSample sample =
      mh_state_estimation(data, area_prior(params), cfg, rng);
  for (const auto& s : sample.states) {
    CHECK(s[0] >= 0.0);
    CHECK(s[0] <= 0.3);
    CHECK(s[1] >= 0.4);
    CHECK(s[1] <= 1.0);
  }
  // ground projection is the sorted union with the atoms
  const auto ground = ground_projection(data, sample.states.front());
  CHECK(ground.size() == 3);
  CHECK(std::is_sorted(ground.begin(), ground.end()));
}

TEST_CASE("all points observed exactly: nothing to simulate") {
  ObservedData data;
  data.window = Window{0.0, 1.0};
  data.atoms = {0.3, 0.6};
  AreaInteractionParams params{12.0, 0.0, 0.05, data.window};
  MhConfig cfg;
  std::mt19937_64 rng(131);
  const PosteriorSample sample =
      mh_state_estimation(data, area_prior(params), cfg, rng);
  CHECK(sample.states.empty());
  CHECK(sample.proposed == 0);
}

TEST_CASE("initialisation failure is reported") {
  const ObservedData data = toy_data();
  const LogPriorDensity zero = [](const std::vector<double>&) {
    return -std::numeric_limits<double>::infinity();
  };
  MhConfig cfg;
  cfg.init_retry_cap = 50;
  std::mt19937_64 rng(137);
  CHECK_THROWS_AS(mh_state_estimation(data, zero, cfg, rng), NumericError);
}

TEST_CASE("chain reaches both ends of every interval") {
  ObservedData data;
  data.window = Window{0.0, 1.0};
  data.intervals = {IntervalCensored{0.0, 1.0}, IntervalCensored{0.1, 0.9}};
  AreaInteractionParams params{12.0, 0.0, 0.05, data.window};
  MhConfig cfg;
  cfg.burnin = 0;
  cfg.sweeps = 10000;
  std::mt19937_64 rng(139);
  const PosteriorSample sample =
      mh_state_estimation(data, area_prior(params), cfg, rng);
  for (std::size_t i = 0; i < 2; ++i) {
    const IntervalCensored iv = data.clipped(i);
    double lo = 1e9, hi = -1e9;
    for (const auto& s : sample.states) {
      lo = std::min(lo, s[i]);
      hi = std::max(hi, s[i]);
    }
    const double eps = 0.01 * iv.l;
    CHECK(lo < iv.a + eps);
    CHECK(hi > iv.a + iv.l - eps);
  }
}

TEST_CASE("single-site kernel is in detailed balance with the posterior") {
  ObservedData data;
  data.window = Window{0.0, 1.0};
  data.atoms = {0.5};
  data.intervals = {IntervalCensored{0.2, 0.45}, IntervalCensored{0.45, 0.45}};
  AreaInteractionParams params{12.0, 1.2, 0.1, data.window};
  const LogPriorDensity prior = area_prior(params);

  std::mt19937_64 rng(149);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_in = [&](std::size_t i) {
    const IntervalCensored iv = data.clipped(i);
    return iv.a + unit(rng) * iv.l;
  };
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> x{draw_in(0), draw_in(1)};
    std::vector<double> y = x;
    const std::size_t i = unit(rng) < 0.5 ? 0 : 1;
    y[i] = draw_in(i);
    const double lx = log_posterior_unnorm(data, x, prior);
    const double ly = log_posterior_unnorm(data, y, prior);
    const double fxy = std::exp(lx) * mh_acceptance_probability(ly - lx);
    const double fyx = std::exp(ly) * mh_acceptance_probability(lx - ly);
    CHECK(std::abs(fxy - fyx) <= 1e-12 * std::max({fxy, fyx, 1e-300}));
  }
}

TEST_CASE("one-interval posterior matches a grid oracle") {
  ObservedData data;
  data.window = Window{0.0, 1.0};
  data.atoms = {0.51, 0.58};
  data.intervals = {IntervalCensored{0.45, 0.4}};
  AreaInteractionParams params{12.0, 1.2, 0.1, data.window};
  const LogPriorDensity prior = area_prior(params);

  MhConfig cfg;
  cfg.burnin = 5000;
  cfg.sweeps = 100000;
  std::mt19937_64 rng(151);
  const PosteriorSample sample = mh_state_estimation(data, prior, cfg, rng);

  constexpr int kBins = 50;
  std::vector<double> hist(kBins, 0.0);
  for (const auto& s : sample.states) {
    const int b = std::min(
        static_cast<int>((s[0] - 0.45) / 0.4 * kBins), kBins - 1);
    hist[static_cast<std::size_t>(b)] += 1.0;
  }
  for (double& h : hist) h /= static_cast<double>(sample.states.size());

  std::vector<double> oracle(kBins, 0.0);
  double total = 0.0;
  constexpr int kSub = 32;
  std::vector<double> x(1);
  for (int b = 0; b < kBins; ++b) {
    double acc = 0.0;
    for (int s = 0; s < kSub; ++s) {
      x[0] = 0.45 + 0.4 * (b + (s + 0.5) / kSub) / kBins;
      acc += std::exp(log_posterior_unnorm(data, x, prior));
    }
    oracle[static_cast<std::size_t>(b)] = acc;
    total += acc;
  }
  for (double& o : oracle) o /= total;

  double tv = 0.0;
  for (int b = 0; b < kBins; ++b)
    tv += std::abs(hist[static_cast<std::size_t>(b)] -
                   oracle[static_cast<std::size_t>(b)]);
  tv *= 0.5;
  CHECK(tv < 0.05);
}

TEST_CASE("poisson closed form: constant and linear intensity") {
  // constant intensity on the toy interval is uniform
  {
    const ObservedData data = toy_data();
    std::mt19937_64 rng(157);
    std::vector<double> draws(10000);
    for (double& d : draws)
      d = poisson_posterior_sample(data, [](double) { return 3.0; }, rng)[0];
    const KsResult ks = ks_test(
        draws, [](double x) { return std::clamp((x - 0.45) / 0.4, 0.0, 1.0); });
    CHECK(ks.p_value > 0.01);
  }
  // lambda(s) = s on [0, 1]: mean 2/3
  {
    ObservedData data;
    data.window = Window{-0.01, 1.01};
    data.intervals = {IntervalCensored{0.0, 1.0}};
    std::mt19937_64 rng(163);
    std::vector<double> draws(100000);
    for (double& d : draws)
      d = poisson_posterior_sample(data, [](double s) { return s; }, rng)[0];
    const MeanSe ms = mean_se(draws);
    CHECK(std::abs(ms.mean - 2.0 / 3.0) < 3.0 * ms.se);
  }
  // window clipping restricts the support
  {
    ObservedData data;
    data.window = Window{0.0, 1.0};
    data.intervals = {IntervalCensored{-0.5, 1.0}};
    std::mt19937_64 rng(167);
    for (int i = 0; i < 2000; ++i) {
      const double d =
          poisson_posterior_sample(data, [](double) { return 1.0; }, rng)[0];
      CHECK(d >= 0.0);
      CHECK(d <= 0.5);
    }
  }
  // vanishing intensity mass is an error
  {
    const ObservedData data = toy_data();
    std::mt19937_64 rng(173);
    CHECK_THROWS_AS(
        poisson_posterior_sample(data, [](double) { return 0.0; }, rng),
        NumericError);
  }
}

TEST_CASE("observed data validation") {
  ObservedData data;
  data.window = Window{0.0, 1.0};
  data.atoms = {1.5};
  CHECK_THROWS_AS(data.validate(), DataError);
  data.atoms = {0.5};
  data.intervals = {IntervalCensored{2.0, 0.5}};
  CHECK_THROWS_AS(data.validate(), DataError);
  data.intervals = {IntervalCensored{0.9, 0.5}};
  CHECK_NOTHROW(data.validate());
  CHECK(data.clipped(0).a == doctest::Approx(0.9));
  CHECK(data.clipped(0).l == doctest::Approx(0.1));
}
