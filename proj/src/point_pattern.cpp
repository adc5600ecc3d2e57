#include "aoristic/point_pattern.hpp"

#include <algorithm>
#include <cmath>

#include "aoristic/errors.hpp"

namespace aoristic {

void Window::validate() const {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ConfigError("window: need finite lo < hi");
}

PointPattern::PointPattern(std::vector<double> points)
    : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i] - points_[i - 1] < kDuplicateTol)
      throw DataError("point pattern: duplicate points");
  }
}

bool PointPattern::all_inside(const Window& w) const {
  return std::all_of(points_.begin(), points_.end(),
                     [&](double x) { return w.contains(x); });
}

}  // namespace aoristic
