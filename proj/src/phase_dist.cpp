#include "aoristic/phase_dist.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "aoristic/errors.hpp"

namespace aoristic {

PhaseDist PhaseDist::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw ConfigError("exponential phase: rate must be positive and finite");
  return PhaseDist(Kind::Exponential, 0.0, rate);
}

PhaseDist PhaseDist::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw ConfigError("gamma phase: shape must be positive and finite");
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw ConfigError("gamma phase: rate must be positive and finite");
  return PhaseDist(Kind::Gamma, shape, rate);
}

PhaseDist PhaseDist::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw ConfigError("uniform phase: need 0 <= lo < hi < inf");
  return PhaseDist(Kind::Uniform, lo, hi);
}

double PhaseDist::mean() const {
  switch (kind_) {
    case Kind::Exponential:
      return 1.0 / b_;
    case Kind::Gamma:
      return a_ / b_;
    case Kind::Uniform:
      return 0.5 * (a_ + b_);
  }
  return 0.0;  // unreachable
}

double PhaseDist::pdf(double x) const {
  if (x < 0.0) return 0.0;
  switch (kind_) {
    case Kind::Exponential:
      return b_ * std::exp(-b_ * x);
    case Kind::Gamma:
      if (x == 0.0) {
        if (a_ > 1.0) return 0.0;
        if (a_ == 1.0) return b_;
        return std::numeric_limits<double>::infinity();
      }
      return std::exp(a_ * std::log(b_) + (a_ - 1.0) * std::log(x) - b_ * x -
                      std::lgamma(a_));
    case Kind::Uniform:
      return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
  }
  return 0.0;
}

double PhaseDist::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Exponential:
      return -std::expm1(-b_ * x);
    case Kind::Gamma:
      if (std::isinf(x)) return 1.0;
      return boost::math::gamma_p(a_, b_ * x);
    case Kind::Uniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
  }
  return 0.0;
}

double PhaseDist::sample(std::mt19937_64& rng) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::Exponential: {
      std::exponential_distribution<double> d(b_);
      v = d(rng);
      break;
    }
    case Kind::Gamma: {
      // std::gamma_distribution is parametrised by shape and scale.
      std::gamma_distribution<double> d(a_, 1.0 / b_);
      v = d(rng);
      break;
    }
    case Kind::Uniform: {
      std::uniform_real_distribution<double> d(a_, b_);
      v = d(rng);
      break;
    }
  }
  if (!std::isfinite(v))
    throw NumericError("phase distribution produced a non-finite draw: " +
                       describe());
  return v;
}

std::string PhaseDist::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Exponential:
      os << "exponential(rate=" << b_ << ")";
      break;
    case Kind::Gamma:
      os << "gamma(shape=" << a_ << ", rate=" << b_ << ")";
      break;
    case Kind::Uniform:
      os << "uniform(" << a_ << ", " << b_ << ")";
      break;
  }
  return os.str();
}

}  // namespace aoristic
