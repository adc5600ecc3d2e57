#ifndef AORISTIC_POSTERIOR_HPP
#define AORISTIC_POSTERIOR_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "aoristic/point_pattern.hpp"

namespace aoristic {

/// Parametrised censoring interval [a, a+l] with l > 0.
struct IntervalCensored {
  double a = 0.0;
  double l = 0.0;

  bool contains(double x) const { return x >= a && x <= a + l; }
};

/// A realisation of the observation process: m exactly observed points
/// (atoms) and n-m non-degenerate intervals, on an open window.
struct ObservedData {
  std::vector<double> atoms;
  std::vector<IntervalCensored> intervals;
  Window window;

  std::size_t m() const { return atoms.size(); }
  std::size_t n() const { return atoms.size() + intervals.size(); }
  std::size_t latent_count() const { return intervals.size(); }

  /// Closed bounds of interval i clipped to the window.
  IntervalCensored clipped(std::size_t i) const;
  void validate() const;  // throws DataError
};

/// Number of bijections mapping the points onto the intervals with every
/// point inside its assigned interval: the permanent of the 0/1 containment
/// matrix, evaluated by Ryser's formula. k <= 20 enforced.
std::uint64_t count_valid_assignments(
    std::span<const double> points,
    std::span<const IntervalCensored> intervals);

/// All valid bijections, each encoded as d with d[i] = index of the point
/// assigned to interval i. Enumeration is capped at k <= 10.
std::vector<std::vector<int>> enumerate_valid_assignments(
    std::span<const double> points,
    std::span<const IntervalCensored> intervals);

struct AssignmentDistribution {
  std::vector<std::vector<int>> assignments;
  double probability;  // uniform: 1 / #assignments
};

/// Conditional law of the interval assignments given the point locations:
/// uniform over the valid bijections.
AssignmentDistribution assignment_distribution(
    std::span<const double> points,
    std::span<const IntervalCensored> intervals);

/// Symmetric log prior density of an unordered point pattern, unnormalised;
/// -infinity signals zero density.
using LogPriorDensity = std::function<double(const std::vector<double>&)>;

/// Log of the unnormalised posterior density (without the data constant):
/// log prior of {atoms, x} plus log of the assignment count. -infinity when
/// any support condition fails. Oracle use only: the sampler never
/// evaluates the assignment sum.
double log_posterior_unnorm(const ObservedData& data,
                            std::span<const double> x,
                            const LogPriorDensity& log_prior);

struct MhConfig {
  std::uint64_t burnin = 10000;
  std::uint64_t sweeps = 100000;
  std::uint64_t thin = 1;
  std::uint64_t init_retry_cap = 100000;
};

struct PosteriorSample {
  std::vector<std::vector<double>> states;  // thinned post-burn-in snapshots
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;

  double acceptance_rate() const {
    return proposed == 0 ? 0.0
                         : static_cast<double>(accepted) /
                               static_cast<double>(proposed);
  }
};

/// Single-site Metropolis-Hastings on the product state space of one latent
/// time per non-degenerate interval: pick an interval uniformly, propose a
/// uniform point on its window intersection, accept with the prior density
/// ratio. When n = m there is nothing to simulate and the empty sample is
/// returned.
PosteriorSample mh_state_estimation(const ObservedData& data,
                                    const LogPriorDensity& log_prior,
                                    const MhConfig& config,
                                    std::mt19937_64& rng);

/// min(1, exp(log_target_diff)): the Metropolis acceptance probability for
/// a symmetric proposal.
double mh_acceptance_probability(double log_target_diff);

/// Sorted union of the atoms and a latent state: the ground-process view.
std::vector<double> ground_projection(const ObservedData& data,
                                      std::span<const double> x);

/// Poisson-prior closed form: one independent draw per interval with
/// density intensity(x) / integral over the clipped interval, by
/// inverse-CDF on a fine grid.
std::vector<double> poisson_posterior_sample(
    const ObservedData& data, const std::function<double(double)>& intensity,
    std::mt19937_64& rng);

}  // namespace aoristic

#endif
