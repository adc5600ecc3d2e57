#ifndef AORISTIC_VALIDATION_HPP
#define AORISTIC_VALIDATION_HPP

#include <string>
#include <vector>

namespace aoristic {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

/// Identifiers of the validation criteria, 1..8.
std::vector<int> all_criteria();

/// Runs one validation criterion with its pinned seed and tolerances.
/// `threads` bounds replicate-level parallelism; results are identical for
/// any thread count.
CriterionResult run_criterion(int id, int threads);

}  // namespace aoristic

#endif
