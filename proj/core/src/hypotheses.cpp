#include "feqlab/hypotheses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"

namespace feqlab {

const char* to_string(ContractionStatus status) {
  switch (status) {
    case ContractionStatus::contracting: return "contracting";
    case ContractionStatus::marginal: return "marginal";
    case ContractionStatus::not_contracting: return "not-contracting";
  }
  return "unknown";
}

namespace {

double eval_f(const Expr& f, double x, double y) {
  const std::array<double, 2> xy{x, y};
  try {
    return eval(f, xy);
  } catch (const ExprError& e) {
    std::ostringstream os;
    os.precision(17);
    os << "evaluating F(" << x << ", " << y << ") failed: " << e.what();
    throw EvaluationError(os.str(), x, y);
  }
}

/// Max over the (grid_n+1)^2 grid of row_fn(x_i, y_j), combined row by row.
template <class PointFn>
double grid_max(const Interval& I, std::size_t grid_n, PointFn&& fn) {
  std::vector<double> rows(grid_n + 1, 0.0);
  detail::parallel_chunks(grid_n + 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = grid_point(I, i, grid_n);
      double worst = 0.0;
      for (std::size_t j = 0; j <= grid_n; ++j) {
        worst = std::max(worst, fn(x, grid_point(I, j, grid_n), i, j));
      }
      rows[i] = worst;
    }
  });
  return *std::max_element(rows.begin(), rows.end());
}

}  // namespace

CheckResult check_maps_into(const Expr& f, const Interval& interval, std::size_t grid_n) {
  if (grid_n < 2) throw InvalidArgument("check_maps_into: grid_n must be at least 2");
  const double worst = grid_max(interval, grid_n, [&](double x, double y, auto, auto) {
    const double v = eval_f(f, x, y);
    return std::max({0.0, interval.a() - v, v - interval.b()});
  });
  return {worst <= kMapsIntoTolerance, worst};
}

CheckResult check_internality(const Expr& f, const Interval& interval, std::size_t grid_n) {
  if (grid_n < 2) throw InvalidArgument("check_internality: grid_n must be at least 2");
  // Strictness is tracked separately: F == min(x,y) violates with magnitude 0.
  std::vector<char> row_strict_fail(grid_n + 1, 0);
  const double worst = grid_max(interval, grid_n, [&](double x, double y, std::size_t i,
                                                      std::size_t j) {
    if (i == j) return 0.0;
    const double v = eval_f(f, x, y);
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    if (!(lo < v && v < hi)) row_strict_fail[i] = 1;
    return std::max({0.0, lo - v, v - hi});
  });
  const bool any_fail = std::any_of(row_strict_fail.begin(), row_strict_fail.end(),
                                    [](char c) { return c != 0; });
  return {!any_fail, worst};
}

SliceContraction check_slice_contraction(const DynSystem& sys, double epsilon,
                                         std::size_t grid_n, double margin) {
  SliceContraction out;
  out.c1 = contraction_modulus(sys.slice(1), sys.interval(), epsilon, grid_n);
  out.c2 = contraction_modulus(sys.slice(2), sys.interval(), epsilon, grid_n);
  const double c = std::max(out.c1, out.c2);
  if (c <= 1.0 - margin) {
    out.status = ContractionStatus::contracting;
  } else if (c < 1.0) {
    out.status = ContractionStatus::marginal;
  } else {
    out.status = ContractionStatus::not_contracting;
  }
  out.ok = out.status == ContractionStatus::contracting;
  return out;
}

namespace {

struct Minimum {
  double at;
  double value;
};

/// Minimizes g over [a,b]: best grid point, then trisection of the cell pair
/// around it. Keeps the best point ever evaluated.
template <class G>
Minimum grid_trisect(const Interval& I, std::size_t grid_n, G&& g) {
  Minimum best{I.a(), std::numeric_limits<double>::infinity()};
  std::size_t best_i = 0;
  for (std::size_t i = 0; i <= grid_n; ++i) {
    const double t = grid_point(I, i, grid_n);
    const double v = g(t);
    if (v < best.value) {
      best = {t, v};
      best_i = i;
    }
  }
  double lo = grid_point(I, best_i == 0 ? 0 : best_i - 1, grid_n);
  double hi = grid_point(I, std::min(best_i + 1, grid_n), grid_n);
  auto consider = [&](double t) {
    const double v = g(t);
    if (v < best.value) best = {t, v};
    return v;
  };
  for (int round = 0; round < 60; ++round) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (consider(m1) <= consider(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  consider(lo);
  consider(hi);
  return best;
}

}  // namespace

Witnesses find_witnesses(const DynSystem& sys, std::size_t grid_n, double tol) {
  if (grid_n < 2) throw InvalidArgument("find_witnesses: grid_n must be at least 2");
  if (!(tol > 0.0)) throw InvalidArgument("find_witnesses: tol must be positive");
  const auto& I = sys.interval();
  const auto m1 = grid_trisect(I, grid_n, [&](double t) {
    return std::abs(sys.delta1(t) - I.a());
  });
  const auto m2 = grid_trisect(I, grid_n, [&](double t) {
    return std::abs(I.b() - sys.delta2(t));
  });
  Witnesses w;
  w.x0 = m1.at;
  w.r1 = m1.value;
  w.y0 = m2.at;
  w.r2 = m2.value;
  w.ok = w.r1 <= tol && w.r2 <= tol;
  return w;
}

CoverCheck check_cover(const DynSystem& sys, std::size_t grid_n) {
  const auto& I = sys.interval();
  CoverCheck out;
  out.hull1 = image_hull(sys.slice(1), I, grid_n);
  out.hull2 = image_hull(sys.slice(2), I, grid_n);

  auto clip = [&](Hull h) {
    return Hull{std::clamp(h.lo, I.a(), I.b()), std::clamp(h.hi, I.a(), I.b())};
  };
  Hull first = clip(out.hull1);
  Hull second = clip(out.hull2);
  if (second.lo < first.lo) std::swap(first, second);
  double covered = first.length() + second.length();
  const double overlap = std::min(first.hi, second.hi) - second.lo;
  if (overlap > 0.0) covered -= overlap;
  out.gap = std::max(0.0, I.length() - covered);
  out.ok = out.gap <= I.length() * 1e-9;
  return out;
}

HypothesisConfig HypothesisConfig::defaults_for(const Interval& interval) {
  HypothesisConfig c;
  c.epsilon = 1e-3 * interval.length();
  c.witness_tol = 1e-9 * interval.length();
  return c;
}

bool HypothesisReport::all_ok() const {
  return !preconditions_violated && maps_into.ok && slice_contraction.ok &&
         witnesses.ok && cover.ok;
}

HypothesisReport run_all(const Problem& problem, const HypothesisConfig& config) {
  HypothesisReport report;
  report.grid_n = config.grid_n;
  report.epsilon = config.epsilon;
  const auto& I = problem.interval;

  auto guarded = [&report](auto&& check) {
    try {
      check();
      return true;
    } catch (const Error& e) {
      report.errors.emplace_back(e.what());
      return false;
    }
  };

  if (!guarded([&] { report.maps_into = check_maps_into(problem.f, I, config.grid_n); })) {
    report.preconditions_violated = true;
  }
  guarded([&] { report.internality = check_internality(problem.f, I, config.grid_n); });
  if (report.preconditions_violated || !report.maps_into.ok) {
    report.preconditions_violated = true;
    return report;
  }

  std::optional<DynSystem> sys;
  if (!guarded([&] { sys.emplace(make_system(problem.f, I)); })) {
    report.preconditions_violated = true;
    return report;
  }
  guarded([&] {
    report.slice_contraction =
        check_slice_contraction(*sys, config.epsilon, config.grid_n, config.margin);
  });
  guarded([&] {
    report.witnesses = find_witnesses(*sys, config.grid_n, config.witness_tol);
  });
  guarded([&] { report.cover = check_cover(*sys, config.grid_n); });
  return report;
}

}  // namespace feqlab
