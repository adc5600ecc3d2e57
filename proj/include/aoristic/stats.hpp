#ifndef AORISTIC_STATS_HPP
#define AORISTIC_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace aoristic {

struct KsResult {
  double statistic;  // sup |F_hat - F|
  double p_value;    // asymptotic, Stephens' correction
  std::size_t n;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf);

/// Complement of the Kolmogorov limit distribution, Q(x) = 2 sum (-1)^{j-1}
/// exp(-2 j^2 x^2).
double kolmogorov_q(double x);

struct Chi2Result {
  double statistic;
  double p_value;
  int dof;
};

/// Chi-square goodness of fit of integer counts against Poisson(mean).
/// Cells with expected count below `min_expected` are pooled into their
/// neighbours.
Chi2Result chi2_poisson_gof(const std::vector<int>& sample, double mean,
                            double min_expected = 5.0);

struct MeanSe {
  double mean;
  double se;  // standard error of the mean
  std::size_t n;
};

/// Mean and i.i.d. standard error.
MeanSe mean_se(std::span<const double> x);

struct BatchMeans {
  double mean;
  double se;   // standard error of the mean from batch means
  double ess;  // effective sample size implied by the batch variance
};

/// Batch-means standard error for a (possibly autocorrelated) sequence.
/// n_batches <= 0 selects floor(sqrt(n)).
BatchMeans batch_means(std::span<const double> x, int n_batches = 0);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is
/// partitioned by index so results are identical for any thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace aoristic

#endif
