// Validation suite runner: evaluates each criterion with its pinned seed
// and tolerances and prints one pass/fail line per criterion.

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "aoristic/validation.hpp"

int main(int argc, char** argv) {
  std::vector<int> criteria;
  int threads = 4;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      criteria.push_back(std::stoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      threads = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance_tests [--criterion N]... [--threads T]\n";
      return 2;
    }
  }
  if (criteria.empty()) criteria = aoristic::all_criteria();

  bool all_pass = true;
  for (int id : criteria) {
    const aoristic::CriterionResult res = aoristic::run_criterion(id, threads);
    all_pass = all_pass && res.pass;
    std::cout << (res.pass ? "[PASS]" : "[FAIL]") << " criterion " << res.id
              << " (" << res.name << "): " << res.details << " ["
              << res.seconds << "s]" << std::endl;
  }
  return all_pass ? 0 : 1;
}
