#ifndef AORISTIC_MARKS_HPP
#define AORISTIC_MARKS_HPP

#include <random>

#include "aoristic/phase_dist.hpp"
#include "aoristic/renewal.hpp"

namespace aoristic {

/// Censoring interval in relative form: the latent point sits at the origin
/// and the recorded interval is [a, a+l] with a <= 0 <= a+l. The atom l = 0
/// means the point was observed exactly.
struct Mark {
  double a = 0.0;
  double l = 0.0;

  bool is_atom() const { return l == 0.0; }
};

/// Equilibrium mark law: an atom at (0,0) with weight p, and a continuous
/// component with density f_Y(l)/E[Y] on {a <= 0 <= a+l} with weight 1-p.
struct MarkLaw {
  double p;
  PhaseDist interval_length_base;  // the Y-phase law f_Y
  double mean_y;

  static MarkLaw with_atom_prob(double p, const PhaseDist& f_y);
  /// p = E[Z]/E[T], f_Y = the Y-phase of the censoring cycle.
  static MarkLaw from_renewal(const RenewalSpec& spec);
};

struct MarkDensity {
  bool is_atom;
  double weight;   // mixture weight of the component hit (p or 1-p)
  double density;  // continuous kernel f_Y(l)/E[Y]; 0 for the atom
};

MarkDensity mark_density(const MarkLaw& law, const Mark& mark);

Mark sample_mark(const MarkLaw& law, std::mt19937_64& rng);

/// Length-biased density l * f_Y(l) / E[Y] of observed interval lengths.
double length_biased_density(const PhaseDist& f_y, double l);

/// Exact draw from the length-biased law (Gamma(k+1, rate) for Gamma phases,
/// Gamma(2, rate) for exponential, inverse-CDF for uniform).
double sample_length_biased(const PhaseDist& f_y, std::mt19937_64& rng);

}  // namespace aoristic

#endif
