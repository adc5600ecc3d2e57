#include "aoristic/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aoristic/errors.hpp"

namespace aoristic {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

IntervalCensored ObservedData::clipped(std::size_t i) const {
  const IntervalCensored& iv = intervals[i];
  const double lo = std::max(iv.a, window.lo);
  const double hi = std::min(iv.a + iv.l, window.hi);
  return IntervalCensored{lo, hi - lo};
}

void ObservedData::validate() const {
  window.validate();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!window.contains(atoms[i])) {
      std::ostringstream os;
      os << "observed data: atom " << i << " at " << atoms[i]
         << " lies outside the window";
      throw DataError(os.str());
    }
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (!(intervals[i].l > 0.0)) {
      std::ostringstream os;
      os << "observed data: interval " << i << " has non-positive length";
      throw DataError(os.str());
    }
    if (!(clipped(i).l > 0.0)) {
      std::ostringstream os;
      os << "observed data: interval " << i
         << " does not intersect the window";
      throw DataError(os.str());
    }
  }
}

std::uint64_t count_valid_assignments(
    std::span<const double> points,
    std::span<const IntervalCensored> intervals) {
  if (points.size() != intervals.size())
    throw ConfigError("count_valid_assignments: size mismatch");
  const std::size_t k = points.size();
  if (k > 20)
    throw ConfigError("count_valid_assignments: k > 20 (exponential cost)");
  if (k == 0) return 1;

  // containment rows as bitmasks over points: row[i] bit j set iff point j
  // fits interval i
  std::vector<std::uint32_t> rows(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (intervals[i].contains(points[j]))
        rows[i] |= (std::uint32_t{1} << j);

  // Ryser's formula with Gray-code subset updates: running row sums over
  // the current column subset.
  std::vector<long double> row_sums(k, 0.0L);
  long double total = 0.0L;
  const std::uint32_t full = k == 32 ? ~std::uint32_t{0}
                                     : (std::uint32_t{1} << k) - 1;
  std::uint32_t prev_gray = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t gray = s ^ (s >> 1);
    const std::uint32_t changed = gray ^ prev_gray;
    const int j = std::countr_zero(changed);
    const long double delta = (gray & changed) ? 1.0L : -1.0L;
    for (std::size_t i = 0; i < k; ++i)
      if (rows[i] & changed) row_sums[i] += delta;
    prev_gray = gray;
    long double prod = 1.0L;
    for (std::size_t i = 0; i < k; ++i) prod *= row_sums[i];
    const int parity = std::popcount(gray) & 1;
    total += parity == static_cast<int>(k & 1) ? prod : -prod;
    (void)j;
  }
  if (total < 0.0L) total = 0.0L;
  return static_cast<std::uint64_t>(std::llroundl(total));
}

namespace {

void enumerate_rec(const std::vector<std::vector<bool>>& fits,
                   std::vector<int>& current, std::vector<bool>& used,
                   std::vector<std::vector<int>>& out) {
  const std::size_t i = current.size();
  if (i == fits.size()) {
    out.push_back(current);
    return;
  }
  for (std::size_t j = 0; j < fits.size(); ++j) {
    if (used[j] || !fits[i][j]) continue;
    used[j] = true;
    current.push_back(static_cast<int>(j));
    enumerate_rec(fits, current, used, out);
    current.pop_back();
    used[j] = false;
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_valid_assignments(
    std::span<const double> points,
    std::span<const IntervalCensored> intervals) {
  if (points.size() != intervals.size())
    throw ConfigError("enumerate_valid_assignments: size mismatch");
  if (points.size() > 10)
    throw ConfigError("enumerate_valid_assignments: k > 10");
  std::vector<std::vector<bool>> fits(
      intervals.size(), std::vector<bool>(points.size(), false));
  for (std::size_t i = 0; i < intervals.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      fits[i][j] = intervals[i].contains(points[j]);
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::vector<bool> used(points.size(), false);
  enumerate_rec(fits, current, used, out);
  return out;
}

AssignmentDistribution assignment_distribution(
    std::span<const double> points,
    std::span<const IntervalCensored> intervals) {
  auto assignments = enumerate_valid_assignments(points, intervals);
  if (assignments.empty())
    throw DataError(
        "assignment_distribution: no valid assignment (data/state mismatch)");
  const double prob = 1.0 / static_cast<double>(assignments.size());
  return AssignmentDistribution{std::move(assignments), prob};
}

double log_posterior_unnorm(const ObservedData& data,
                            std::span<const double> x,
                            const LogPriorDensity& log_prior) {
  if (x.size() != data.latent_count())
    throw ConfigError("log_posterior_unnorm: state size mismatch");
  for (double xi : x)
    if (!data.window.contains(xi)) return kNegInf;
  const std::uint64_t count = count_valid_assignments(
      x, std::span<const IntervalCensored>(data.intervals));
  if (count == 0) return kNegInf;
  std::vector<double> pattern = ground_projection(data, x);
  // coincident points have zero mass under the pattern law
  for (std::size_t i = 1; i < pattern.size(); ++i)
    if (pattern[i] - pattern[i - 1] < PointPattern::kDuplicateTol)
      return kNegInf;
  const double lp = log_prior(pattern);
  if (!(lp > kNegInf)) return kNegInf;
  return lp + std::log(static_cast<double>(count));
}

double mh_acceptance_probability(double log_target_diff) {
  return log_target_diff >= 0.0 ? 1.0 : std::exp(log_target_diff);
}

std::vector<double> ground_projection(const ObservedData& data,
                                      std::span<const double> x) {
  std::vector<double> pattern(data.atoms);
  pattern.insert(pattern.end(), x.begin(), x.end());
  std::sort(pattern.begin(), pattern.end());
  return pattern;
}

namespace {

bool collides(const std::vector<double>& pattern) {
  for (std::size_t i = 1; i < pattern.size(); ++i)
    if (pattern[i] - pattern[i - 1] < PointPattern::kDuplicateTol) return true;
  return false;
}

}  // namespace

PosteriorSample mh_state_estimation(const ObservedData& data,
                                    const LogPriorDensity& log_prior,
                                    const MhConfig& config,
                                    std::mt19937_64& rng) {
  data.validate();
  PosteriorSample sample;
  const std::size_t k = data.latent_count();
  if (k == 0) return sample;  // all points observed perfectly

  std::vector<IntervalCensored> clipped(k);
  for (std::size_t i = 0; i < k; ++i) clipped[i] = data.clipped(i);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_in = [&](std::size_t i) {
    return clipped[i].a + unit(rng) * clipped[i].l;
  };

  // initial state: independent uniforms, redrawn until the prior is positive
  std::vector<double> x(k);
  double log_p = kNegInf;
  std::uint64_t attempts = 0;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) x[i] = draw_in(i);
    std::vector<double> pattern = ground_projection(data, x);
    if (!collides(pattern)) {
      log_p = log_prior(pattern);
      if (log_p > kNegInf) break;
    }
    if (++attempts >= config.init_retry_cap)
      throw NumericError(
          "mh_state_estimation: could not find a prior-positive initial "
          "state");
  }

  const std::uint64_t total = config.burnin + config.sweeps;
  sample.states.reserve(config.sweeps / std::max<std::uint64_t>(config.thin, 1));
  for (std::uint64_t step = 0; step < total; ++step) {
    const std::size_t i = static_cast<std::size_t>(
        unit(rng) * static_cast<double>(k));
    const double y = draw_in(i);
    ++sample.proposed;

    const double old_xi = x[i];
    x[i] = y;
    std::vector<double> pattern = ground_projection(data, x);
    bool accept = false;
    double log_p_new = kNegInf;
    if (!collides(pattern)) {
      log_p_new = log_prior(pattern);
      if (log_p_new > kNegInf) {
        const double diff = log_p_new - log_p;
        accept = diff >= 0.0 || unit(rng) < std::exp(diff);
      }
    }
    if (accept) {
      log_p = log_p_new;
      ++sample.accepted;
    } else {
      x[i] = old_xi;
    }

    if (step >= config.burnin &&
        (step - config.burnin + 1) % config.thin == 0) {
      for (std::size_t j = 0; j < k; ++j) {
        if (!(x[j] >= clipped[j].a && x[j] <= clipped[j].a + clipped[j].l) ||
            !data.window.contains(x[j]))
          throw NumericError("mh_state_estimation: state left E(u)");
      }
      if (!(log_p > kNegInf))
        throw NumericError("mh_state_estimation: prior vanished on chain");
      sample.states.push_back(x);
    }
  }
  return sample;
}

std::vector<double> poisson_posterior_sample(
    const ObservedData& data, const std::function<double(double)>& intensity,
    std::mt19937_64& rng) {
  data.validate();
  constexpr int kGrid = 4096;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out;
  out.reserve(data.latent_count());
  for (std::size_t i = 0; i < data.latent_count(); ++i) {
    const IntervalCensored iv = data.clipped(i);
    const double h = iv.l / kGrid;
    std::vector<double> cum(kGrid + 1, 0.0);
    double prev = intensity(iv.a);
    for (int g = 1; g <= kGrid; ++g) {
      const double t = iv.a + h * g;
      const double cur = intensity(t);
      cum[static_cast<std::size_t>(g)] =
          cum[static_cast<std::size_t>(g) - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    const double mass = cum.back();
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      std::ostringstream os;
      os << "poisson_posterior_sample: interval " << i
         << " carries no intensity mass";
      throw NumericError(os.str());
    }
    const double target = unit(rng) * mass;
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const std::size_t g =
        std::min(static_cast<std::size_t>(
                     std::max<std::ptrdiff_t>(it - cum.begin(), 1)),
                 static_cast<std::size_t>(kGrid));
    const double c0 = cum[g - 1], c1 = cum[g];
    const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.5;
    out.push_back(iv.a + h * (static_cast<double>(g - 1) + frac));
  }
  return out;
}

}  // namespace aoristic
