#pragma once

#include <span>
#include <vector>

#include "feqlab/interval.hpp"

namespace feqlab {

/// Piecewise-linear function through (grid[i], values[i]). Arguments outside
/// the grid are clamped to its ends.
class TabulatedFunction {
 public:
  TabulatedFunction(std::vector<double> grid, std::vector<double> values);

  /// Samples on the uniform (grid_n+1)-point grid of `interval`.
  static TabulatedFunction uniform(const Interval& interval, std::vector<double> values);

  double operator()(double z) const;

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  Interval domain() const { return Interval(grid_.front(), grid_.back()); }
  std::size_t grid_n() const noexcept { return grid_.size() - 1; }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Linear interpolation in sorted `xs`; clamps outside [xs.front(), xs.back()].
double interpolate_sorted(std::span<const double> xs, std::span<const double> ys, double z);

}  // namespace feqlab
