#include "aoristic/marks.hpp"

#include <cmath>

#include "aoristic/errors.hpp"

namespace aoristic {

MarkLaw MarkLaw::with_atom_prob(double p, const PhaseDist& f_y) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw ConfigError("mark law: atom probability must lie in [0, 1]");
  return MarkLaw{p, f_y, f_y.mean()};
}

MarkLaw MarkLaw::from_renewal(const RenewalSpec& spec) {
  const double p = spec.z.mean() / spec.mean_cycle();
  return MarkLaw{p, spec.y, spec.y.mean()};
}

MarkDensity mark_density(const MarkLaw& law, const Mark& mark) {
  if (mark.is_atom()) return MarkDensity{true, law.p, 0.0};
  const bool supported = mark.a <= 0.0 && mark.a + mark.l >= 0.0 && mark.l > 0.0;
  const double kernel =
      supported ? law.interval_length_base.pdf(mark.l) / law.mean_y : 0.0;
  return MarkDensity{false, 1.0 - law.p, kernel};
}

Mark sample_mark(const MarkLaw& law, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < law.p) return Mark{0.0, 0.0};
  const double l = sample_length_biased(law.interval_length_base, rng);
  std::uniform_real_distribution<double> left(-l, 0.0);
  return Mark{left(rng), l};
}

double length_biased_density(const PhaseDist& f_y, double l) {
  if (!(l > 0.0))
    throw ConfigError("length_biased_density: length must be positive");
  return l * f_y.pdf(l) / f_y.mean();
}

double sample_length_biased(const PhaseDist& f_y, std::mt19937_64& rng) {
  switch (f_y.kind()) {
    case PhaseDist::Kind::Exponential:
      return PhaseDist::gamma(2.0, f_y.rate()).sample(rng);
    case PhaseDist::Kind::Gamma:
      return PhaseDist::gamma(f_y.shape() + 1.0, f_y.rate()).sample(rng);
    case PhaseDist::Kind::Uniform: {
      // F(l) = (l^2 - lo^2)/(hi^2 - lo^2) on [lo, hi]
      const double lo2 = f_y.lo() * f_y.lo();
      const double hi2 = f_y.hi() * f_y.hi();
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      return std::sqrt(lo2 + unit(rng) * (hi2 - lo2));
    }
  }
  throw NumericError("sample_length_biased: unknown phase kind");
}

}  // namespace aoristic
