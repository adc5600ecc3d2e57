#ifndef AORISTIC_SIMULATE_HPP
#define AORISTIC_SIMULATE_HPP

#include <random>
#include <vector>

#include "aoristic/marks.hpp"
#include "aoristic/posterior.hpp"
#include "aoristic/prior.hpp"

namespace aoristic {

struct SimulatedObservation {
  std::vector<double> truth;  // latent times, ascending
  ObservedData observed;      // marks resolved to absolute records
};

/// Draws a latent pattern from the area-interaction prior (perfect CFTP
/// draw, or a birth-death chain of `bdmh_sweeps` steps), marks each point
/// independently, and resolves the marks to absolute atoms and intervals.
SimulatedObservation simulate_observation(const AreaInteractionParams& prior,
                                          const MarkLaw& marks, bool use_cftp,
                                          int bdmh_sweeps,
                                          std::mt19937_64& rng);

}  // namespace aoristic

#endif
