#ifndef AORISTIC_POINT_PATTERN_HPP
#define AORISTIC_POINT_PATTERN_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace aoristic {

/// Open observation interval (lo, hi).
struct Window {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x > lo && x < hi; }
  void validate() const;
};

/// Finite point configuration stored as a strictly ascending vector.
/// Points closer than the duplicate tolerance (1e-12) are rejected.
class PointPattern {
 public:
  static constexpr double kDuplicateTol = 1e-12;

  PointPattern() = default;
  explicit PointPattern(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double operator[](std::size_t i) const { return points_[i]; }

  bool all_inside(const Window& w) const;

 private:
  std::vector<double> points_;
};

}  // namespace aoristic

#endif
