#pragma once

// Independent reference computations for the unit and acceptance tests. These
// use plain C++ closures and textbook formulas, never the library's DSL
// evaluator or orbit machinery.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace feqlab::oracle {

/// (p - q) / (ln p - ln q) with the diagonal value p.
inline double textbook_logmean(double p, double q) {
  if (p == q) return p;
  return (p - q) / (std::log(p) - std::log(q));
}

/// Exhaustive max of |g(x1)-g(x2)|/|x1-x2| over grid pairs at distance >= eps.
inline double brute_modulus(const std::function<double(double)>& g, double a, double b,
                            double eps, std::size_t n) {
  std::vector<double> xs(n + 1);
  std::vector<double> gs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    gs[i] = g(xs[i]);
  }
  double best = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double d = xs[j] - xs[i];
      if (d >= eps) best = std::max(best, std::abs(gs[j] - gs[i]) / d);
    }
  }
  return best;
}

/// Smallest n with c^n * diam < eps, by direct iteration.
inline int iterate_mixing_depth(double c, double diam, double eps) {
  int n = 0;
  double v = diam;
  while (v >= eps) {
    v *= c;
    ++n;
  }
  return n;
}

/// Orbit of 0 under t/2 and (t+1)/2 over words of length <= depth, as
/// numerators over 2^depth (exact integer arithmetic).
inline std::set<std::int64_t> dyadic_orbit_numerators(int depth) {
  const std::int64_t den = std::int64_t{1} << depth;
  std::set<std::int64_t> all{0};
  std::set<std::int64_t> frontier{0};
  for (int k = 0; k < depth; ++k) {
    std::set<std::int64_t> next;
    for (auto t : frontier) {
      // After k < depth halvings every numerator is a multiple of 2^(depth-k).
      next.insert(t / 2);
      next.insert((t + den) / 2);
    }
    all.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return all;
}

/// sup over the (n+1)^2 grid of |f(F(x,y)) - H(f(x), f(y), x, y)|.
inline double brute_square_residual(const std::function<double(double)>& f,
                                    const std::function<double(double, double)>& F,
                                    const std::function<double(double, double, double, double)>& H,
                                    double a, double b, std::size_t n) {
  double sup = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    for (std::size_t j = 0; j <= n; ++j) {
      const double y = a + (b - a) * static_cast<double>(j) / static_cast<double>(n);
      sup = std::max(sup, std::abs(f(F(x, y)) - H(f(x), f(y), x, y)));
    }
  }
  return sup;
}

}  // namespace feqlab::oracle
