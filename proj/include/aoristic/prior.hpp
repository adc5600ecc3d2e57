#ifndef AORISTIC_PRIOR_HPP
#define AORISTIC_PRIOR_HPP

#include <random>
#include <span>
#include <vector>

#include "aoristic/point_pattern.hpp"

namespace aoristic {

/// Area-interaction process on a 1-D window, with unnormalised density
///   h(x) = beta^{n(x)} exp[ -(eta / 2r) * |window ∩ U_r(x)| ]
/// where U_r(x) is the union of radius-r closed intervals around the points.
/// eta = 0 reduces to a Poisson process of intensity beta; eta > 0 favours
/// clustering, eta < 0 regularity.
struct AreaInteractionParams {
  double beta = 1.0;
  double eta = 0.0;
  double r = 0.05;
  Window window;

  double log_gamma() const { return eta / (2.0 * r); }
  /// Uniform Papangelou bound beta * max(1, exp(-eta)).
  double local_stability_bound() const;
  void validate() const;
};

/// Lebesgue measure of window ∩ U_r(x). Points must be sorted ascending.
double covered_length(std::span<const double> sorted_points, double r,
                      const Window& window);
double covered_length(const PointPattern& x, double r, const Window& window);

double log_density_unnorm(const AreaInteractionParams& params,
                          const PointPattern& x);

/// Papangelou conditional intensity exp(log h(x ∪ {u}) - log h(x)).
double papangelou(const AreaInteractionParams& params, const PointPattern& x,
                  double u);

/// Approximate draw after `sweeps` birth/death Metropolis-Hastings steps
/// started from the empty pattern.
PointPattern sample_prior_bdmh(const AreaInteractionParams& params, int sweeps,
                               std::mt19937_64& rng);

/// Thinned draws from one long birth/death chain.
std::vector<PointPattern> sample_prior_bdmh_chain(
    const AreaInteractionParams& params, int burnin, int draws, int thin,
    std::mt19937_64& rng);

struct CftpOptions {
  double t0 = 1.0;         // first backward epoch
  int max_doublings = 20;  // abort beyond t0 * 2^max_doublings
};

/// Perfect draw by dominated coupling from the past. Throws NumericError if
/// the funnels have not coalesced by the configured maximum epoch; never
/// returns a biased sample.
PointPattern sample_prior_cftp(const AreaInteractionParams& params,
                               std::mt19937_64& rng, CftpOptions opt = {});

}  // namespace aoristic

#endif
