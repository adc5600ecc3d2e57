#ifndef AORISTIC_PHASE_DIST_HPP
#define AORISTIC_PHASE_DIST_HPP

#include <random>
#include <string>

namespace aoristic {

/// One phase law of the alternating censoring cycle. Supported families:
/// Exponential(rate), Gamma(shape, rate), Uniform(lo, hi). All have finite
/// positive mean; parameters are validated on construction.
class PhaseDist {
 public:
  enum class Kind { Exponential, Gamma, Uniform };

  static PhaseDist exponential(double rate);
  static PhaseDist gamma(double shape, double rate);
  static PhaseDist uniform(double lo, double hi);

  Kind kind() const { return kind_; }
  double shape() const { return a_; }  // Gamma only
  double rate() const { return b_; }   // Exponential, Gamma
  double lo() const { return a_; }     // Uniform
  double hi() const { return b_; }     // Uniform

  double mean() const;
  double pdf(double x) const;
  double cdf(double x) const;
  double sample(std::mt19937_64& rng) const;

  std::string describe() const;

 private:
  PhaseDist(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_;
  double b_;
};

}  // namespace aoristic

#endif
