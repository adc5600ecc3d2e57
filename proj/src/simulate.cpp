#include "aoristic/simulate.hpp"

namespace aoristic {

SimulatedObservation simulate_observation(const AreaInteractionParams& prior,
                                          const MarkLaw& marks, bool use_cftp,
                                          int bdmh_sweeps,
                                          std::mt19937_64& rng) {
  const PointPattern pattern = use_cftp
                                   ? sample_prior_cftp(prior, rng)
                                   : sample_prior_bdmh(prior, bdmh_sweeps, rng);
  SimulatedObservation out;
  out.truth = pattern.points();
  out.observed.window = prior.window;
  for (double t : out.truth) {
    const Mark mark = sample_mark(marks, rng);
    if (mark.is_atom()) {
      out.observed.atoms.push_back(t);
    } else {
      out.observed.intervals.push_back(IntervalCensored{t + mark.a, mark.l});
    }
  }
  return out;
}

}  // namespace aoristic
