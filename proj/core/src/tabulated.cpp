#include "feqlab/tabulated.hpp"

#include <algorithm>
#include <cmath>

#include "feqlab/error.hpp"

namespace feqlab {

TabulatedFunction::TabulatedFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw InvalidArgument("tabulated function needs at least two matching grid/value entries");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
      throw InvalidArgument("tabulated function entries must be finite");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw InvalidArgument("tabulated function grid must be strictly increasing");
    }
  }
}

TabulatedFunction TabulatedFunction::uniform(const Interval& interval,
                                             std::vector<double> values) {
  if (values.size() < 2) throw InvalidArgument("uniform grid needs at least two values");
  const std::size_t n = values.size() - 1;
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = grid_point(interval, i, n);
  return TabulatedFunction(std::move(grid), std::move(values));
}

double TabulatedFunction::operator()(double z) const {
  return interpolate_sorted(grid_, values_, z);
}

double interpolate_sorted(std::span<const double> xs, std::span<const double> ys, double z) {
  if (z <= xs.front()) return ys.front();
  if (z >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), z);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  if (xs[lo] == z) return ys[lo];
  const double t = (z - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + (ys[hi] - ys[lo]) * t;
}

}  // namespace feqlab
