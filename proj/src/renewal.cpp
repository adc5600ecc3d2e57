#include "aoristic/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "aoristic/errors.hpp"

namespace aoristic {

std::size_t RenewalTrajectory::count_renewals(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(renewals.begin(), renewals.end(), t) -
      renewals.begin());
}

RenewalTrajectory simulate_trajectory(const RenewalSpec& spec, double horizon,
                                      std::mt19937_64& rng) {
  if (!(horizon > 0.0))
    throw ConfigError("simulate_trajectory: horizon must be positive");
  RenewalTrajectory traj;
  traj.horizon = horizon;
  double s = 0.0;
  while (s < horizon) {
    const double y = spec.y.sample(rng);
    const double z = spec.z.sample(rng);
    traj.splits.push_back(s + y);
    s += y + z;
    traj.renewals.push_back(s);
  }
  return traj;
}

AgeExcess censor_point(double t, const RenewalTrajectory& traj) {
  if (t < 0.0 || t >= traj.coverage())
    throw DataError("censor_point: t outside trajectory coverage");
  // cycle index: first renewal strictly after t ([start, end) membership)
  const auto it =
      std::upper_bound(traj.renewals.begin(), traj.renewals.end(), t);
  const std::size_t cycle =
      static_cast<std::size_t>(it - traj.renewals.begin());
  const double start = cycle == 0 ? 0.0 : traj.renewals[cycle - 1];
  const double split = traj.splits[cycle];
  if (t >= split) return AgeExcess{0.0, 0.0, true};  // Z-phase
  return AgeExcess{t - start, split - t, false};
}

RenewalFunction solve_renewal_function(const RenewalSpec& spec, double t_max,
                                       double step) {
  if (!(t_max > 0.0) || !(step > 0.0))
    throw ConfigError("solve_renewal_function: need t_max > 0 and step > 0");
  const std::size_t n = static_cast<std::size_t>(std::ceil(t_max / step)) + 1;

  // density of the cycle length T = Y + Z by trapezoid convolution
  std::vector<double> fy(n), fz(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * step;
    fy[i] = spec.y.pdf(t);
    fz[i] = spec.z.pdf(t);
  }
  // guard against non-integrable grid endpoints (Gamma shape < 1 at zero)
  if (!std::isfinite(fy[0])) fy[0] = 0.0;
  if (!std::isfinite(fz[0])) fz[0] = 0.0;
  std::vector<double> ft(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.5 * (fy[0] * fz[i] + fy[i] * fz[0]);
    for (std::size_t j = 1; j < i; ++j) acc += fy[j] * fz[i - j];
    ft[i] = acc * step;
  }
  // cumulative trapezoid for F_T
  std::vector<double> cdf_t(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    cdf_t[i] = cdf_t[i - 1] + 0.5 * step * (ft[i - 1] + ft[i]);

  RenewalFunction m;
  m.step = step;
  m.coarse_step_warning = step > spec.mean_cycle() / 10.0;
  m.values.assign(n, 0.0);
  // M_i = F_T(t_i) + h [ f_T(0) M_i / 2 + sum_{j=1}^{i-1} f_T(j) M_{i-j} ]
  // with M_0 = 0 and f_T(0) = 0 for positive cycle laws.
  const double diag = 1.0 - 0.5 * step * ft[0];
  for (std::size_t i = 1; i < n; ++i) {
    double acc = cdf_t[i];
    for (std::size_t j = 1; j < i; ++j)
      acc += step * ft[j] * m.values[i - j];
    m.values[i] = acc / diag;
  }
  return m;
}

double RenewalFunction::at(double t) const {
  if (t <= 0.0) return 0.0;
  const double pos = t / step;
  const std::size_t lo = std::min(
      static_cast<std::size_t>(pos), values.size() - 2);
  const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

/// Midpoint-rule Stieltjes integral int_a^b g(s) dM(s) using finite
/// differences of the M grid; partial cells contribute proportionally.
double stieltjes_midpoint(const RenewalFunction& m, double a, double b,
                          const std::function<double(double)>& g) {
  if (!(b > a)) return 0.0;
  a = std::max(a, 0.0);
  b = std::min(b, m.t_max());
  if (!(b > a)) return 0.0;
  const double h = m.step;
  const std::size_t first = static_cast<std::size_t>(a / h);
  const std::size_t last =
      std::min(static_cast<std::size_t>(b / h), m.values.size() - 2);
  double acc = 0.0;
  for (std::size_t j = first; j <= last; ++j) {
    const double cell_lo = std::max(a, static_cast<double>(j) * h);
    const double cell_hi = std::min(b, static_cast<double>(j + 1) * h);
    if (!(cell_hi > cell_lo)) continue;
    const double dm =
        (m.values[j + 1] - m.values[j]) * (cell_hi - cell_lo) / h;
    acc += g(0.5 * (cell_lo + cell_hi)) * dm;
  }
  return acc;
}

}  // namespace

double renewal_atom_size(const RenewalSpec& spec, double t,
                         const RenewalFunction& m) {
  if (t < 0.0) throw ConfigError("renewal_atom_size: t must be nonnegative");
  if (t > m.t_max() * (1.0 + 1e-12))
    throw ConfigError("renewal_atom_size: renewal grid does not cover t");
  const double integral = stieltjes_midpoint(
      m, 0.0, t, [&](double s) { return 1.0 - spec.y.cdf(t - s); });
  return spec.y.cdf(t) - integral;
}

double age_excess_cdf(const RenewalSpec& spec, double t, double u, double v,
                      const RenewalFunction& m) {
  if (u < 0.0 || u > t) throw ConfigError("age_excess_cdf: need 0 <= u <= t");
  if (v < 0.0) throw ConfigError("age_excess_cdf: need v >= 0");
  if (t > m.t_max() * (1.0 + 1e-12))
    throw ConfigError("age_excess_cdf: renewal grid does not cover t");
  double p = renewal_atom_size(spec, t, m);
  if (u == t) p += spec.y.cdf(t + v) - spec.y.cdf(t);
  p += stieltjes_midpoint(m, t - u, t, [&](double s) {
    return spec.y.cdf(t + v - s) - spec.y.cdf(t - s);
  });
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace aoristic
