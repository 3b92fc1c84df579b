#include "feqlab/dynsys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "net.hpp"
#include "parallel.hpp"

namespace feqlab {

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    std::ostringstream os;
    os.precision(17);
    os << "invalid interval [" << a << ", " << b << "]: a < b required";
    throw InvalidArgument(os.str());
  }
}

// ---------------------------------------------------------------------------

DynSystem::DynSystem(Expr f, Interval interval)
    : f_(std::move(f)), interval_(interval) {}

double DynSystem::delta1(double t) const {
  const std::array<double, 2> xy{interval_.a(), t};
  return eval(f_, xy);
}

double DynSystem::delta2(double t) const {
  const std::array<double, 2> xy{t, interval_.b()};
  return eval(f_, xy);
}

RealMap DynSystem::slice(int map) const {
  DynSystem copy = *this;
  return [copy, map](double t) { return copy.apply(map, t); };
}

DynSystem make_system(const Expr& f, const Interval& interval) {
  DynSystem sys(f, interval);
  constexpr std::size_t kGrid = 10000;
  for (int map = 1; map <= 2; ++map) {
    for (std::size_t i = 0; i <= kGrid; ++i) {
      const double t = grid_point(interval, i, kGrid);
      double value = 0.0;
      try {
        value = sys.apply(map, t);
      } catch (const ExprError& e) {
        throw EvaluationError(std::string("evaluating delta") + char('0' + map) +
                                  " failed: " + e.what(),
                              t, map == 1 ? interval.a() : interval.b());
      }
      if (!interval.contains(value, kBoxTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "range violation: delta" << map << "(" << t << ") = " << value
           << " lies outside [" << interval.a() << ", " << interval.b() << "]";
        throw RangeViolation(os.str(), t, value);
      }
    }
  }
  return sys;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> sample_map(const RealMap& map, const Interval& interval,
                               std::size_t grid_n) {
  std::vector<double> values(grid_n + 1);
  detail::parallel_chunks(grid_n + 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      values[i] = map(grid_point(interval, i, grid_n));
    }
  });
  return values;
}

}  // namespace

double contraction_modulus(const RealMap& map, const Interval& interval,
                           double epsilon, std::size_t grid_n) {
  if (!(epsilon > 0.0)) throw InvalidArgument("contraction_modulus: epsilon must be positive");
  if (grid_n < 2) throw InvalidArgument("contraction_modulus: grid_n must be at least 2");
  if (epsilon > interval.length()) {
    throw InvalidArgument("contraction_modulus: no pair at distance >= epsilon");
  }
  const auto values = sample_map(map, interval, grid_n);
  std::vector<double> xs(grid_n + 1);
  for (std::size_t i = 0; i <= grid_n; ++i) xs[i] = grid_point(interval, i, grid_n);

  // Row maxima are combined afterwards so the result does not depend on how
  // rows were split across workers.
  std::vector<double> row_max(grid_n + 1, -1.0);
  detail::parallel_chunks(grid_n + 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double best = -1.0;
      for (std::size_t j = i + 1; j <= grid_n; ++j) {
        const double d = xs[j] - xs[i];
        if (d < epsilon) continue;
        best = std::max(best, std::abs(values[j] - values[i]) / d);
      }
      row_max[i] = best;
    }
  });
  const double result = *std::max_element(row_max.begin(), row_max.end());
  if (result < 0.0) {
    throw InvalidArgument("contraction_modulus: no grid pair at distance >= epsilon");
  }
  return result;
}

int mixing_depth(double c_eps, double diam, double epsilon) {
  if (!(diam > 0.0) || !(epsilon > 0.0)) {
    throw InvalidArgument("mixing_depth: diam and epsilon must be positive");
  }
  if (!(c_eps < 1.0)) {
    throw NotContracting("mixing_depth: modulus " + std::to_string(c_eps) +
                         " is not contracting");
  }
  if (diam < epsilon) return 0;
  if (c_eps <= 0.0) return 1;
  // Start from the logarithmic estimate and settle on the exact boundary.
  int n = std::max(0, static_cast<int>(std::floor(std::log(epsilon / diam) /
                                                  std::log(c_eps))) - 1);
  while (std::pow(c_eps, n) * diam >= epsilon) ++n;
  while (n > 0 && std::pow(c_eps, n - 1) * diam < epsilon) --n;
  return n;
}

// ---------------------------------------------------------------------------

std::vector<double> OrbitTable::points() const {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.point);
  return out;
}

std::size_t OrbitTable::max_depth() const {
  std::size_t depth = 0;
  for (const auto& n : nodes) depth = std::max(depth, n.depth());
  return depth;
}

namespace {

constexpr std::size_t kRayLimit = 4096;

double checked_step(const DynSystem& sys, int map, double t, const Word& word) {
  double value = 0.0;
  try {
    value = sys.apply(map, t);
  } catch (const ExprError& e) {
    throw EvaluationError("orbit step failed at word '" + word + "': " + e.what(),
                          t, std::nan(""));
  }
  const auto& I = sys.interval();
  if (!I.contains(value, kBoxTolerance)) {
    throw RangeViolation("orbit left the interval at word '" + word + "'", t, value);
  }
  return std::clamp(value, I.a(), I.b());
}

}  // namespace

OrbitTable orbit_expand(const DynSystem& sys, double seed, double epsilon,
                        std::size_t max_nodes, double delta_dup, MapOrder order) {
  const auto& I = sys.interval();
  if (!I.contains(seed)) throw InvalidArgument("orbit_expand: seed outside the interval");
  if (!(delta_dup > 0.0) || !(epsilon > delta_dup)) {
    throw InvalidArgument("orbit_expand: epsilon > delta_dup > 0 required");
  }
  if (max_nodes < 1) throw InvalidArgument("orbit_expand: max_nodes must be positive");

  const std::array<int, 2> maps =
      order == MapOrder::map1_first ? std::array{1, 2} : std::array{2, 1};

  std::vector<OrbitNode> nodes;
  detail::NetBuilder net(I, delta_dup);
  auto try_insert = [&](double p, Word word) -> bool {
    if (net.find_near(p)) return false;
    if (nodes.size() >= max_nodes) {
      throw IncompleteNet("orbit_expand: node budget exhausted before epsilon-net",
                          net.largest_gap(), nodes.size());
    }
    net.insert(p, nodes.size());
    nodes.push_back({p, std::move(word)});
    return true;
  };
  auto finish = [&] {
    OrbitTable table;
    table.seed = seed;
    table.delta_dup = delta_dup;
    table.largest_gap = net.largest_gap();
    table.nodes = std::move(nodes);
    std::sort(table.nodes.begin(), table.nodes.end(),
              [](const OrbitNode& l, const OrbitNode& r) { return l.point < r.point; });
    return table;
  };

  try_insert(seed, Word{});
  if (net.largest_gap() <= epsilon) return finish();

  // Fixed-point rays: the attracting fixed point of each map is in the closure
  // of every orbit, and the floating-point iteration reaches it exactly.
  for (int map : maps) {
    double t = seed;
    Word word;
    for (std::size_t k = 0; k < kRayLimit; ++k) {
      const double next = checked_step(sys, map, t, word);
      if (next == t) break;
      t = next;
      word.push_back(static_cast<char>('0' + map));
    }
    if (!word.empty()) try_insert(t, std::move(word));
    if (net.largest_gap() <= epsilon) return finish();
  }

  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next_frontier;
    for (std::size_t idx : frontier) {
      const double z = nodes[idx].point;
      const Word parent_word = nodes[idx].word;
      for (int map : maps) {
        const double child = checked_step(sys, map, z, parent_word);
        Word word = parent_word;
        word.push_back(static_cast<char>('0' + map));
        if (try_insert(child, std::move(word))) {
          next_frontier.push_back(nodes.size() - 1);
          if (net.largest_gap() <= epsilon) return finish();
        }
      }
    }
    frontier = std::move(next_frontier);
  }
  throw IncompleteNet("orbit_expand: orbit is finite and never forms an epsilon-net",
                      net.largest_gap(), nodes.size());
}

NetCheck epsilon_net_check(std::span<const double> points, const Interval& interval,
                           double epsilon) {
  if (points.empty()) return {interval.length() <= epsilon, interval.length()};
  double gap = std::max(points.front() - interval.a(), interval.b() - points.back());
  for (std::size_t i = 1; i < points.size(); ++i) {
    gap = std::max(gap, points[i] - points[i - 1]);
  }
  return {gap <= epsilon, gap};
}

Hull image_hull(const RealMap& map, const Interval& interval, std::size_t grid_n) {
  if (grid_n < 2) throw InvalidArgument("image_hull: grid_n must be at least 2");
  const auto values = sample_map(map, interval, grid_n);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

DensityCertificate certify_density(const DynSystem& sys, double epsilon,
                                   std::size_t grid_n, double achieved_gap,
                                   double margin) {
  const auto& I = sys.interval();
  // Pairs at distance >= epsilon only exist for epsilon <= diam.
  const double pair_eps = std::min(epsilon, I.length());
  DensityCertificate cert;
  cert.epsilon = epsilon;
  cert.c1 = contraction_modulus(sys.slice(1), I, pair_eps, grid_n);
  cert.c2 = contraction_modulus(sys.slice(2), I, pair_eps, grid_n);
  cert.c_eps = std::max(cert.c1, cert.c2);
  if (cert.c_eps <= 1.0 - margin) {
    cert.depth_bound = mixing_depth(cert.c_eps, I.length(), epsilon);
  }
  cert.achieved_gap = achieved_gap;
  return cert;
}

}  // namespace feqlab
