#include "aoristic/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <thread>

#include "aoristic/errors.hpp"

namespace aoristic {

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf) {
  if (sample.empty()) throw NumericError("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  const double sn = std::sqrt(n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  return KsResult{d, kolmogorov_q(lambda), sample.size()};
}

namespace {

double poisson_pmf(int k, double mean) {
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

}  // namespace

Chi2Result chi2_poisson_gof(const std::vector<int>& sample, double mean,
                            double min_expected) {
  if (sample.empty()) throw NumericError("chi2_poisson_gof: empty sample");
  const int k_max = *std::max_element(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());

  std::vector<double> observed(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int v : sample) observed[static_cast<std::size_t>(v)] += 1.0;
  std::vector<double> expected(observed.size());
  double tail = 1.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const double p = poisson_pmf(static_cast<int>(k), mean);
    expected[k] = n * p;
    tail -= p;
  }
  // everything above k_max goes into the last cell
  expected.back() += n * std::max(tail, 0.0);

  // pool adjacent cells until every pooled cell has expected >= min_expected
  std::vector<double> obs_pooled, exp_pooled;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    o_acc += observed[k];
    e_acc += expected[k];
    if (e_acc >= min_expected) {
      obs_pooled.push_back(o_acc);
      exp_pooled.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_pooled.empty()) {
      obs_pooled.push_back(o_acc);
      exp_pooled.push_back(e_acc);
    } else {
      obs_pooled.back() += o_acc;
      exp_pooled.back() += e_acc;
    }
  }

  double stat = 0.0;
  for (std::size_t i = 0; i < exp_pooled.size(); ++i) {
    const double diff = obs_pooled[i] - exp_pooled[i];
    stat += diff * diff / exp_pooled[i];
  }
  const int dof = std::max(1, static_cast<int>(exp_pooled.size()) - 1);
  const double p_value = boost::math::gamma_q(0.5 * dof, 0.5 * stat);
  return Chi2Result{stat, p_value, dof};
}

MeanSe mean_se(std::span<const double> x) {
  if (x.empty()) throw NumericError("mean_se: empty sample");
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = x.size() > 1 ? ss / (n - 1.0) : 0.0;
  return MeanSe{mean, std::sqrt(var / n), x.size()};
}

BatchMeans batch_means(std::span<const double> x, int n_batches) {
  if (x.size() < 4) throw NumericError("batch_means: sample too small");
  int b = n_batches > 0 ? n_batches
                        : static_cast<int>(std::sqrt(static_cast<double>(x.size())));
  b = std::clamp(b, 2, static_cast<int>(x.size() / 2));
  const std::size_t len = x.size() / static_cast<std::size_t>(b);
  std::vector<double> means(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) {
    const auto begin = x.begin() + static_cast<std::ptrdiff_t>(i * len);
    means[static_cast<std::size_t>(i)] =
        std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(len), 0.0) /
        static_cast<double>(len);
  }
  const std::size_t used = static_cast<std::size_t>(b) * len;
  const double grand =
      std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(used),
                      0.0) /
      static_cast<double>(used);
  double ssb = 0.0;
  for (double m : means) ssb += (m - grand) * (m - grand);
  const double var_mean =
      ssb / (static_cast<double>(b) * (static_cast<double>(b) - 1.0));

  double ssx = 0.0;
  for (std::size_t i = 0; i < used; ++i) ssx += (x[i] - grand) * (x[i] - grand);
  const double var_x = ssx / (static_cast<double>(used) - 1.0);

  const double se = std::sqrt(var_mean);
  const double ess = var_mean > 0.0 ? var_x / var_mean
                                    : static_cast<double>(used);
  return BatchMeans{grand, se, ess};
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace aoristic
