#ifndef AORISTIC_ESTIMATE_HPP
#define AORISTIC_ESTIMATE_HPP

#include <random>
#include <span>
#include <string>
#include <vector>

#include "aoristic/phase_dist.hpp"
#include "aoristic/posterior.hpp"
#include "aoristic/prior.hpp"

namespace aoristic {

/// Fraction of atoms m/n: the maximum likelihood estimate of the censoring
/// mixture weight.
double estimate_atom_prob(const ObservedData& data);

struct GammaFit {
  double shape;  // k-hat of the Y-phase law (length-biased shape minus one)
  double rate;
  double se_shape;
  double se_rate;
  int iterations;
};

/// Gamma maximum likelihood on observed interval lengths via Newton
/// iteration on the digamma equation, reported on the Y-phase scale:
/// lengths follow Gamma(k+1, rate), so shape = k* - 1. Throws NumericError
/// on non-convergence or a degenerate sample and when k* <= 1.
GammaFit fit_gamma_lengths(std::span<const double> lengths);

struct ForwardFit {
  double p_hat;
  double se_p;
  double shape_hat;
  double rate_hat;
  double se_shape;
  double se_rate;
  double loglik;
};

/// Atom probability plus Gamma fit of the interval lengths, with observed-
/// information standard errors and the log-likelihood at the fit.
ForwardFit fit_forward(const ObservedData& data);

/// Forward log-likelihood m log p + (n-m) log(1-p) +
/// sum log(f_Y(l_i)/E[Y]). Returns -infinity for p on the boundary with
/// contradicting counts.
double forward_loglik(const ObservedData& data, double p,
                      const PhaseDist& f_y);

/// One-parameter family over the area-interaction prior for likelihood
/// curves: theta replaces either eta or beta.
struct PriorThetaFamily {
  enum class Param { Eta, Beta };
  AreaInteractionParams base;
  Param param = Param::Eta;

  AreaInteractionParams at(double theta) const;
  /// log h(x; theta) - log h(x; theta0) from the sufficient statistics
  /// (point count, covered length).
  double log_h_ratio(double theta, double theta0, std::size_t n_points,
                     double covered) const;
};

struct PriorCurveConfig {
  std::uint64_t posterior_burnin = 10000;
  std::uint64_t posterior_sweeps = 100000;
  std::uint64_t posterior_thin = 5;
  int prior_draws = 20000;
  int prior_burnin = 2000;
  int prior_thin = 10;
  double ess_floor = 500.0;
};

struct PriorFitCurve {
  std::vector<double> theta_grid;
  std::vector<double> log_rel_lik;  // L(theta), exactly 0 at theta0
  std::vector<double> mc_error;     // combined batch-means standard error
  double theta0 = 0.0;
  std::vector<std::string> warnings;

  std::size_t argmax() const;
};

/// Monte Carlo log relative likelihood of the prior parameter:
/// L(theta) = log E[ h-ratio | posterior at theta0 ]
///          - log E[ h-ratio | prior at theta0 ],
/// both expectations estimated from one stored posterior sample and one
/// stored prior sample.
PriorFitCurve prior_loglik_curve(const ObservedData& data,
                                 std::vector<double> theta_grid, double theta0,
                                 const PriorThetaFamily& family,
                                 const PriorCurveConfig& config,
                                 std::mt19937_64& rng);

}  // namespace aoristic

#endif
