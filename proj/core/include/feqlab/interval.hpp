#pragma once

#include <cstddef>

namespace feqlab {

/// Closed interval [a, b] with finite a < b.
class Interval {
 public:
  Interval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }
  bool contains(double t, double tol = 0.0) const noexcept {
    return t >= a_ - tol && t <= b_ + tol;
  }

  bool operator==(const Interval&) const = default;

 private:
  double a_;
  double b_;
};

/// i-th point of the uniform (n+1)-point grid on `interval`. Endpoints are exact.
inline double grid_point(const Interval& interval, std::size_t i, std::size_t n) {
  if (i == 0) return interval.a();
  if (i >= n) return interval.b();
  return interval.a() +
         interval.length() * (static_cast<double>(i) / static_cast<double>(n));
}

}  // namespace feqlab
