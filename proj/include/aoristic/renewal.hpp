#ifndef AORISTIC_RENEWAL_HPP
#define AORISTIC_RENEWAL_HPP

#include <cstddef>
#include <random>
#include <vector>

#include "aoristic/phase_dist.hpp"

namespace aoristic {

/// Alternating renewal cycle: an observable-gap phase Y followed by a
/// perfect-observation phase Z, independent within a cycle.
struct RenewalSpec {
  PhaseDist y;
  PhaseDist z;

  double mean_cycle() const { return y.mean() + z.mean(); }
};

/// One realisation of the alternating renewal process covering [0, horizon].
/// Cycle n occupies [renewals[n-1], renewals[n]) with the Y-phase on
/// [renewals[n-1], splits[n]) and the Z-phase on [splits[n], renewals[n]).
/// Phase membership treats all intervals as [start, end).
struct RenewalTrajectory {
  std::vector<double> renewals;  // S_1 < S_2 < ... ; back() >= horizon
  std::vector<double> splits;    // S_{n-1} + Y_n, one per cycle
  double horizon = 0.0;

  std::size_t cycles() const { return renewals.size(); }
  double coverage() const { return renewals.empty() ? 0.0 : renewals.back(); }

  /// N(t): number of renewals in [0, t].
  std::size_t count_renewals(double t) const;
};

RenewalTrajectory simulate_trajectory(const RenewalSpec& spec, double horizon,
                                      std::mt19937_64& rng);

/// Age and excess of a time point with respect to the Y-process. Both are
/// zero exactly when the point fell in a Z-phase and is observed perfectly.
struct AgeExcess {
  double age = 0.0;
  double excess = 0.0;
  bool is_atom = false;
};

AgeExcess censor_point(double t, const RenewalTrajectory& traj);

/// Renewal function M on a uniform grid, M(k * step) = values[k].
struct RenewalFunction {
  double step = 0.0;
  std::vector<double> values;
  bool coarse_step_warning = false;

  double t_max() const {
    return step * static_cast<double>(values.size() - 1);
  }
  /// Linear interpolation; clamps to the grid ends.
  double at(double t) const;
};

/// Solves M(t) = F_T(t) + int_0^t M(t-s) dF_T(s) by the trapezoid-
/// discretised Volterra scheme, with F_T obtained by numerical convolution
/// of the two phase laws.
RenewalFunction solve_renewal_function(const RenewalSpec& spec, double t_max,
                                       double step);

inline double default_renewal_step(const RenewalSpec& spec) {
  return spec.mean_cycle() / 200.0;
}

/// Atom size c(t) = F_Y(t) - int_0^t [1 - F_Y(t-s)] dM(s): the probability
/// that t falls in a Z-phase.
double renewal_atom_size(const RenewalSpec& spec, double t,
                         const RenewalFunction& m);

/// P(A(t) <= u, B(t) <= v) for 0 <= u <= t, v >= 0, including the atom and
/// the {u = t} boundary term.
double age_excess_cdf(const RenewalSpec& spec, double t, double u, double v,
                      const RenewalFunction& m);

}  // namespace aoristic

#endif
