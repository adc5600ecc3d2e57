#ifndef AORISTIC_ERRORS_HPP
#define AORISTIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aoristic {

// Invalid model parameters, malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Failure of a numerical procedure (non-convergence, degenerate sample,
// non-coalescence of the perfect sampler).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aoristic

#endif
