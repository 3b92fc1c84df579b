#pragma once

#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <set>

#include "feqlab/interval.hpp"

namespace feqlab::detail {

/// Sorted point set on an interval with merge radius and O(log n) tracking of
/// the largest gap, boundary gaps included.
class NetBuilder {
 public:
  NetBuilder(const Interval& interval, double merge_radius)
      : interval_(interval), radius_(merge_radius) {
    gaps_.insert(interval.length());
  }

  /// Id of the closest stored point within the merge radius.
  std::optional<std::size_t> find_near(double p) const {
    auto hi = points_.lower_bound(p);
    std::optional<std::size_t> best;
    double best_dist = radius_;
    if (hi != points_.end() && hi->first - p <= best_dist) {
      best_dist = hi->first - p;
      best = hi->second;
    }
    if (hi != points_.begin()) {
      auto lo = std::prev(hi);
      if (p - lo->first <= best_dist) best = lo->second;
    }
    return best;
  }

  void insert(double p, std::size_t id) {
    auto [it, inserted] = points_.emplace(p, id);
    if (!inserted) return;
    const double lo = it == points_.begin() ? interval_.a() : std::prev(it)->first;
    auto next = std::next(it);
    const double hi = next == points_.end() ? interval_.b() : next->first;
    gaps_.erase(gaps_.find(hi - lo));
    gaps_.insert(p - lo);
    gaps_.insert(hi - p);
  }

  double largest_gap() const { return *gaps_.rbegin(); }
  std::size_t size() const { return points_.size(); }

 private:
  Interval interval_;
  double radius_;
  std::map<double, std::size_t> points_;
  std::multiset<double> gaps_;
};

}  // namespace feqlab::detail
