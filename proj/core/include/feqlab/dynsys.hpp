#pragma once

// The two-map dynamical system (I, delta1, delta2) with delta1(t) = F(a, t) and
// delta2(t) = F(t, b), orbit expansion by word length, and grid estimates of
// the contraction constants that make every orbit dense.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feqlab/error.hpp"
#include "feqlab/expr.hpp"
#include "feqlab/interval.hpp"

namespace feqlab {

using RealMap = std::function<double(double)>;

/// Sequence of map indices over {'1','2'}, applied left to right from a seed.
using Word = std::string;

enum class MapOrder { map1_first, map2_first };

/// Slack allowed when checking that a map stays inside the interval.
inline constexpr double kBoxTolerance = 1e-12;

/// F evaluated outside [a, b] on a boundary slice.
class RangeViolation : public Error {
 public:
  RangeViolation(const std::string& what, double point, double value)
      : Error(what), point_(point), value_(value) {}
  double point() const noexcept { return point_; }
  double value() const noexcept { return value_; }

 private:
  double point_;
  double value_;
};

class NotContracting : public Error {
 public:
  using Error::Error;
};

/// The node budget ran out before the orbit formed an epsilon-net.
class IncompleteNet : public Error {
 public:
  IncompleteNet(const std::string& what, double achieved_gap, std::size_t nodes)
      : Error(what), achieved_gap_(achieved_gap), nodes_(nodes) {}
  double achieved_gap() const noexcept { return achieved_gap_; }
  std::size_t nodes() const noexcept { return nodes_; }

 private:
  double achieved_gap_;
  std::size_t nodes_;
};

class DynSystem {
 public:
  DynSystem(Expr f, Interval interval);

  const Interval& interval() const noexcept { return interval_; }
  const Expr& f() const noexcept { return f_; }

  double delta1(double t) const;
  double delta2(double t) const;
  /// Applies map 1 or 2.
  double apply(int map, double t) const { return map == 1 ? delta1(t) : delta2(t); }

  RealMap slice(int map) const;

 private:
  Expr f_;
  Interval interval_;
};

/// Builds the slice maps of F over {x, y}; rejects F whose slices leave the
/// interval by more than kBoxTolerance on a 10,001-point grid.
DynSystem make_system(const Expr& f, const Interval& interval);

/// Grid lower bound of the Lipschitz constant of `map` over pairs at distance
/// >= epsilon, using grid_n + 1 uniform points.
double contraction_modulus(const RealMap& map, const Interval& interval,
                           double epsilon, std::size_t grid_n);

/// Smallest n >= 0 with c_eps^n * diam < epsilon.
int mixing_depth(double c_eps, double diam, double epsilon);

struct OrbitNode {
  double point;
  Word word;

  std::size_t depth() const noexcept { return word.size(); }
};

struct OrbitTable {
  double seed = 0.0;
  double delta_dup = 0.0;
  std::vector<OrbitNode> nodes;  // ascending by point
  double largest_gap = 0.0;

  std::vector<double> points() const;
  std::size_t max_depth() const;
};

/// Breadth-first orbit expansion of `seed` until the table is an epsilon-net
/// of the interval. Besides the BFS levels, each map is iterated from the seed
/// until it stalls in floating point; the stalled iterate (an orbit point
/// sitting on the map's attracting fixed point) is recorded with its full
/// word. Throws IncompleteNet when max_nodes is hit first.
OrbitTable orbit_expand(const DynSystem& sys, double seed, double epsilon,
                        std::size_t max_nodes, double delta_dup,
                        MapOrder order = MapOrder::map1_first);

struct NetCheck {
  bool ok;
  double largest_gap;
};

/// Largest gap of sorted `points` including both boundary gaps.
NetCheck epsilon_net_check(std::span<const double> points, const Interval& interval,
                           double epsilon);

/// [lo, hi] image of a map; may be a single point, unlike Interval.
struct Hull {
  double lo;
  double hi;
  double length() const noexcept { return hi - lo; }
};

/// [min, max] of `map` over the uniform grid.
Hull image_hull(const RealMap& map, const Interval& interval, std::size_t grid_n);

struct DensityCertificate {
  double epsilon = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c_eps = 0.0;
  std::optional<int> depth_bound;  // absent unless c_eps <= 1 - margin
  double achieved_gap = 0.0;
};

DensityCertificate certify_density(const DynSystem& sys, double epsilon,
                                   std::size_t grid_n, double achieved_gap,
                                   double margin = 1e-6);

}  // namespace feqlab
