#include "feqlab/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "feqlab/solver.hpp"
#include "parallel.hpp"

namespace feqlab {

const char* to_string(ResidualDomain domain) {
  return domain == ResidualDomain::gamma ? "gamma" : "square";
}

namespace {

[[noreturn]] void rethrow_at(const ExprError& e, double x, double y) {
  std::ostringstream os;
  os.precision(17);
  os << "residual evaluation failed at (" << x << ", " << y << "): " << e.what();
  throw EvaluationError(os.str(), x, y);
}

/// |f(F(x,y)) - H[fx, fy, x, y]| with f(F(x,y)) supplied by `f_at`.
template <class FAt>
double residual(const Problem& p, double x, double y, double fx, double fy, FAt&& f_at) {
  try {
    const std::array<double, 2> xy{x, y};
    const double inner = eval(p.f, xy);
    const std::array<double, 4> uvxy{fx, fy, x, y};
    return std::abs(f_at(inner) - eval(p.h, uvxy));
  } catch (const ExprError& e) {
    rethrow_at(e, x, y);
  }
}

struct Peak {
  double sup = 0.0;
  double x = 0.0;
  double y = 0.0;
  double sum = 0.0;
  std::size_t count = 0;

  void add(double r, double px, double py) {
    if (count == 0 || r > sup) {
      sup = r;
      x = px;
      y = py;
    }
    sum += r;
    ++count;
  }
};

std::vector<double> grid_points(const Interval& I, std::size_t n) {
  std::vector<double> xs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = grid_point(I, i, n);
  return xs;
}

/// Samples nearest to each grid point, deduplicated, ascending.
std::vector<std::size_t> samples_near_grid(const SampleTable& table,
                                           std::span<const double> xs) {
  std::vector<std::size_t> out;
  const auto& s = table.samples;
  for (double x : xs) {
    auto it = std::lower_bound(s.begin(), s.end(), x,
                               [](const Sample& smp, double p) { return smp.point < p; });
    std::size_t idx = static_cast<std::size_t>(it - s.begin());
    if (idx == s.size() ||
        (idx > 0 && x - s[idx - 1].point <= s[idx].point - x)) {
      --idx;
    }
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

double sample_value_at(const SampleTable& table, double z) {
  if (auto hit = table.find(z)) return table.samples[*hit].value;
  return table.interpolate(z);
}

}  // namespace

ResidualReport residual_on_gamma(const TabulatedFunction& f, const Problem& problem,
                                 std::size_t grid_n, const SampleTable* samples) {
  if (grid_n < 1) throw InvalidArgument("residual_on_gamma: grid_n must be at least 1");
  const auto& I = problem.interval;
  const auto ts = grid_points(I, grid_n);
  const double fa = f(I.a());
  const double fb = f(I.b());
  Peak peak;
  for (std::size_t j = 0; j <= grid_n; ++j) {  // {a} x [a,b]
    const double t = ts[j];
    peak.add(residual(problem, I.a(), t, fa, f(t), f), I.a(), t);
  }
  for (std::size_t i = 1; i <= grid_n; ++i) {  // [a,b] x {b}, (a,b) counted once
    const double t = ts[i];
    peak.add(residual(problem, t, I.b(), f(t), fb, f), t, I.b());
  }

  ResidualReport out{ResidualDomain::gamma, grid_n, peak.sup,
                     peak.sum / static_cast<double>(peak.count), peak.x, peak.y,
                     std::nullopt};
  if (samples != nullptr && !samples->samples.empty()) {
    // Both sides of each propagation identity read from the sample table.
    const double A = problem.boundary_a;
    const double B = problem.boundary_b;
    double sup = 0.0;
    for (const auto& s : samples->samples) {
      for (int map = 1; map <= 2; ++map) {
        const double x = map == 1 ? I.a() : s.point;
        const double y = map == 1 ? s.point : I.b();
        const double fx = map == 1 ? A : s.value;
        const double fy = map == 1 ? s.value : B;
        double child = 0.0;
        try {
          const std::array<double, 2> xy{x, y};
          child = eval(problem.f, xy);
        } catch (const ExprError& e) {
          rethrow_at(e, x, y);
        }
        auto hit = samples->find(std::clamp(child, I.a(), I.b()));
        if (!hit) continue;
        const double value = samples->samples[*hit].value;
        sup = std::max(sup, residual(problem, x, y, fx, fy, [value](double) { return value; }));
      }
    }
    out.sup_at_samples = sup;
  }
  return out;
}

ResidualReport residual_on_square(const TabulatedFunction& f, const Problem& problem,
                                  std::size_t grid_n, const SampleTable* samples) {
  if (grid_n < 1) throw InvalidArgument("residual_on_square: grid_n must be at least 1");
  const auto& I = problem.interval;
  const auto xs = grid_points(I, grid_n);
  std::vector<double> fx(grid_n + 1);
  for (std::size_t i = 0; i <= grid_n; ++i) fx[i] = f(xs[i]);

  // One Peak per row, merged in row order: the result does not depend on the
  // partitioning across workers.
  std::vector<Peak> rows(grid_n + 1);
  detail::parallel_chunks(grid_n + 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Peak row;
      for (std::size_t j = 0; j <= grid_n; ++j) {
        row.add(residual(problem, xs[i], xs[j], fx[i], fx[j], f), xs[i], xs[j]);
      }
      rows[i] = row;
    }
  });
  Peak peak;
  for (const auto& row : rows) {
    if (peak.count == 0 || row.sup > peak.sup) {
      peak.sup = row.sup;
      peak.x = row.x;
      peak.y = row.y;
    }
    peak.sum += row.sum;
    peak.count += row.count;
  }

  ResidualReport out{ResidualDomain::square, grid_n, peak.sup,
                     peak.sum / static_cast<double>(peak.count), peak.x, peak.y,
                     std::nullopt};
  if (samples != nullptr && !samples->samples.empty()) {
    // f(x), f(y) are exact sample values; f(F(x,y)) is a sample value when one
    // lies within delta_dup and is interpolated from the samples otherwise.
    const auto picks = samples_near_grid(*samples, xs);
    std::vector<double> row_sup(picks.size(), 0.0);
    detail::parallel_chunks(picks.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Sample& sx = samples->samples[picks[i]];
        double sup = 0.0;
        for (std::size_t k : picks) {
          const Sample& sy = samples->samples[k];
          sup = std::max(sup, residual(problem, sx.point, sy.point, sx.value, sy.value,
                                       [samples](double z) {
                                         return sample_value_at(*samples, z);
                                       }));
        }
        row_sup[i] = sup;
      }
    });
    out.sup_at_samples = *std::max_element(row_sup.begin(), row_sup.end());
  }
  return out;
}

TabulatedFunction tabulate(const Expr& g, const Interval& interval, std::size_t grid_n) {
  if (grid_n < 1) throw InvalidArgument("tabulate: grid_n must be at least 1");
  std::vector<double> values(grid_n + 1);
  for (std::size_t i = 0; i <= grid_n; ++i) {
    const double z = grid_point(interval, i, grid_n);
    const std::array<double, 1> slot{z};
    try {
      values[i] = eval(g, slot);
    } catch (const ExprError& e) {
      rethrow_at(e, z, std::nan(""));
    }
  }
  return TabulatedFunction::uniform(interval, std::move(values));
}

ClosedFormComparison compare_closed_form(const TabulatedFunction& f, const Expr& g) {
  ClosedFormComparison out;
  bool first = true;
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    const double z = f.grid()[i];
    const std::array<double, 1> slot{z};
    double gz = 0.0;
    try {
      gz = eval(g, slot);
    } catch (const ExprError& e) {
      rethrow_at(e, z, std::nan(""));
    }
    const double err = std::abs(f.values()[i] - gz);
    if (first || err > out.sup_err) {
      out.sup_err = err;
      out.argmax = z;
      first = false;
    }
  }
  return out;
}

BoundaryCheck check_boundary(const TabulatedFunction& f, const Problem& problem, double tol) {
  BoundaryCheck out;
  out.error_a = std::abs(f(problem.interval.a()) - problem.boundary_a);
  out.error_b = std::abs(f(problem.interval.b()) - problem.boundary_b);
  out.ok = out.error_a <= tol && out.error_b <= tol;
  return out;
}

bool is_overdetermined(const ResidualReport& gamma, const ResidualReport& square,
                       double value_scale) {
  return square.sup >= 1e3 * gamma.sup && square.sup >= 1e-3 * value_scale;
}

CrossValidation cross_validate(const Problem& problem, const SolveOptions& options) {
  SolveOptions first = options;
  first.map_order = MapOrder::map1_first;
  SolveOptions second = options;
  second.map_order = MapOrder::map2_first;

  const SolveReport r1 = solve(problem, first);
  if (r1.status == SolveStatus::hypotheses_failed) {
    throw Error("cross_validate: hypotheses failed for '" + problem.name + "'");
  }
  const SolveReport r2 = solve(problem, second);
  if (!r1.solution || !r2.solution) {
    throw Error("cross_validate: a run produced no solution (" +
                std::string(to_string(r1.status)) + ", " + to_string(r2.status) + ")");
  }
  CrossValidation out{0.0, r1.status, r2.status};
  const auto& v1 = r1.solution->values();
  const auto& v2 = r2.solution->values();
  for (std::size_t i = 0; i < v1.size(); ++i) {
    out.sup_diff = std::max(out.sup_diff, std::abs(v1[i] - v2[i]));
  }
  return out;
}

}  // namespace feqlab
