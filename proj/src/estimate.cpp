#include "aoristic/estimate.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "aoristic/errors.hpp"
#include "aoristic/stats.hpp"

namespace aoristic {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double estimate_atom_prob(const ObservedData& data) {
  if (data.n() == 0) throw DataError("estimate_atom_prob: empty data");
  return static_cast<double>(data.m()) / static_cast<double>(data.n());
}

GammaFit fit_gamma_lengths(std::span<const double> lengths) {
  if (lengths.size() < 2)
    throw ConfigError("fit_gamma_lengths: need at least 2 lengths");
  const double n = static_cast<double>(lengths.size());
  double sum = 0.0, sum_log = 0.0;
  for (double l : lengths) {
    if (!(l > 0.0))
      throw ConfigError("fit_gamma_lengths: lengths must be positive");
    sum += l;
    sum_log += std::log(l);
  }
  const double mean = sum / n;
  const double s = std::log(mean) - sum_log / n;  // >= 0 by Jensen
  if (!(s > 1e-12))
    throw NumericError("fit_gamma_lengths: degenerate sample (zero spread)");

  // Minka's closed-form start, then Newton on log k - digamma(k) = s.
  double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) /
             (12.0 * s);
  int iter = 0;
  double residual = std::numeric_limits<double>::infinity();
  for (; iter < 100; ++iter) {
    residual = std::log(k) - boost::math::digamma(k) - s;
    if (std::abs(residual) < 1e-13) break;
    const double slope = 1.0 / k - boost::math::trigamma(k);
    double next = k - residual / slope;
    if (!(next > 0.0) || !std::isfinite(next)) next = 0.5 * k;
    k = next;
  }
  if (!std::isfinite(k) || std::abs(residual) > 1e-10)
    throw NumericError("fit_gamma_lengths: Newton iteration did not converge");
  const double rate = k / mean;
  if (!(k > 1.0))
    throw NumericError(
        "fit_gamma_lengths: fitted length-biased shape <= 1; lengths are not "
        "consistent with a length-biased Gamma law");

  // observed information per observation: [[psi'(k), -1/rate],
  // [-1/rate, k/rate^2]]
  const double i11 = boost::math::trigamma(k);
  const double i12 = -1.0 / rate;
  const double i22 = k / (rate * rate);
  const double det = i11 * i22 - i12 * i12;
  const double var_k = i22 / (det * n);
  const double var_rate = i11 / (det * n);
  return GammaFit{k - 1.0, rate, std::sqrt(var_k), std::sqrt(var_rate), iter};
}

double forward_loglik(const ObservedData& data, double p,
                      const PhaseDist& f_y) {
  const double m = static_cast<double>(data.m());
  const double km = static_cast<double>(data.latent_count());
  if (!(p >= 0.0) || !(p <= 1.0))
    throw ConfigError("forward_loglik: p must lie in [0, 1]");
  if ((p == 0.0 && m > 0) || (p == 1.0 && km > 0)) return kNegInf;

  double ll = 0.0;
  if (m > 0) ll += m * std::log(p);
  if (km > 0) ll += km * std::log(1.0 - p);
  const double mean_y = f_y.mean();
  for (const auto& iv : data.intervals) {
    const double f = f_y.pdf(iv.l);
    if (!(f > 0.0)) return kNegInf;
    ll += std::log(f / mean_y);
  }
  return ll;
}

ForwardFit fit_forward(const ObservedData& data) {
  const double p_hat = estimate_atom_prob(data);
  const double n = static_cast<double>(data.n());
  ForwardFit fit{};
  fit.p_hat = p_hat;
  fit.se_p = std::sqrt(p_hat * (1.0 - p_hat) / n);
  if (data.latent_count() < 2)
    throw DataError(
        "fit_forward: need at least 2 non-degenerate intervals to fit the "
        "length law");
  std::vector<double> lengths;
  lengths.reserve(data.latent_count());
  for (const auto& iv : data.intervals) lengths.push_back(iv.l);
  const GammaFit g = fit_gamma_lengths(lengths);
  fit.shape_hat = g.shape;
  fit.rate_hat = g.rate;
  fit.se_shape = g.se_shape;
  fit.se_rate = g.se_rate;
  fit.loglik = forward_loglik(
      data, p_hat, PhaseDist::gamma(g.shape, g.rate));
  return fit;
}

AreaInteractionParams PriorThetaFamily::at(double theta) const {
  AreaInteractionParams p = base;
  switch (param) {
    case Param::Eta:
      p.eta = theta;
      break;
    case Param::Beta:
      p.beta = theta;
      break;
  }
  p.validate();
  return p;
}

double PriorThetaFamily::log_h_ratio(double theta, double theta0,
                                     std::size_t n_points,
                                     double covered) const {
  switch (param) {
    case Param::Eta:
      return -(theta - theta0) / (2.0 * base.r) * covered;
    case Param::Beta:
      return static_cast<double>(n_points) *
             (std::log(theta) - std::log(theta0));
  }
  return 0.0;
}

namespace {

struct SufficientStats {
  std::size_t n_points;
  double covered;
};

// log of the empirical mean of exp(log_w), stabilised, plus the batch-means
// standard error of the log-mean and the effective sample size.
struct LogMeanEstimate {
  double log_mean;
  double se;
  double ess;
};

LogMeanEstimate log_mean_of_ratios(const std::vector<double>& log_w) {
  const double w_max = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> scaled(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i)
    scaled[i] = std::exp(log_w[i] - w_max);
  const BatchMeans bm = batch_means(scaled);
  const double se = bm.mean > 0.0 ? bm.se / bm.mean : 0.0;
  return LogMeanEstimate{w_max + std::log(bm.mean), se, bm.ess};
}

}  // namespace

std::size_t PriorFitCurve::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(log_rel_lik.begin(), log_rel_lik.end()) -
      log_rel_lik.begin());
}

PriorFitCurve prior_loglik_curve(const ObservedData& data,
                                 std::vector<double> theta_grid, double theta0,
                                 const PriorThetaFamily& family,
                                 const PriorCurveConfig& config,
                                 std::mt19937_64& rng) {
  if (theta_grid.empty())
    throw ConfigError("prior_loglik_curve: empty parameter grid");
  const AreaInteractionParams params0 = family.at(theta0);

  // one stored sample from the posterior at theta0 ...
  const LogPriorDensity log_prior = [&params0](const std::vector<double>& pts) {
    return log_density_unnorm(params0, PointPattern(pts));
  };
  MhConfig mh;
  mh.burnin = config.posterior_burnin;
  mh.sweeps = config.posterior_sweeps;
  mh.thin = config.posterior_thin;
  const PosteriorSample posterior =
      mh_state_estimation(data, log_prior, mh, rng);
  std::vector<SufficientStats> post_stats;
  post_stats.reserve(posterior.states.size());
  for (const auto& state : posterior.states) {
    const std::vector<double> pattern = ground_projection(data, state);
    post_stats.push_back(
        {pattern.size(),
         covered_length(pattern, params0.r, params0.window)});
  }
  if (post_stats.empty())
    throw DataError(
        "prior_loglik_curve: no latent intervals, nothing to estimate");

  // ... and one from the prior at theta0.
  const std::vector<PointPattern> prior_draws = sample_prior_bdmh_chain(
      params0, config.prior_burnin, config.prior_draws, config.prior_thin,
      rng);
  std::vector<SufficientStats> prior_stats;
  prior_stats.reserve(prior_draws.size());
  for (const auto& pat : prior_draws)
    prior_stats.push_back(
        {pat.size(), covered_length(pat, params0.r, params0.window)});

  PriorFitCurve curve;
  curve.theta0 = theta0;
  curve.theta_grid = std::move(theta_grid);
  curve.log_rel_lik.resize(curve.theta_grid.size());
  curve.mc_error.resize(curve.theta_grid.size());

  std::vector<double> log_w_post(post_stats.size());
  std::vector<double> log_w_prior(prior_stats.size());
  for (std::size_t g = 0; g < curve.theta_grid.size(); ++g) {
    const double theta = curve.theta_grid[g];
    for (std::size_t i = 0; i < post_stats.size(); ++i)
      log_w_post[i] = family.log_h_ratio(theta, theta0, post_stats[i].n_points,
                                         post_stats[i].covered);
    for (std::size_t i = 0; i < prior_stats.size(); ++i)
      log_w_prior[i] = family.log_h_ratio(
          theta, theta0, prior_stats[i].n_points, prior_stats[i].covered);
    const LogMeanEstimate post_est = log_mean_of_ratios(log_w_post);
    const LogMeanEstimate prior_est = log_mean_of_ratios(log_w_prior);
    curve.log_rel_lik[g] = post_est.log_mean - prior_est.log_mean;
    curve.mc_error[g] =
        std::sqrt(post_est.se * post_est.se + prior_est.se * prior_est.se);
    const double ess = std::min(post_est.ess, prior_est.ess);
    if (ess < config.ess_floor) {
      std::ostringstream os;
      os << "theta=" << theta << ": effective sample size " << ess
         << " below floor " << config.ess_floor
         << "; consider more samples";
      curve.warnings.push_back(os.str());
    }
  }
  return curve;
}

}  // namespace aoristic
