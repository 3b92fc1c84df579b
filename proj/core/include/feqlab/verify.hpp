#pragma once

// Residual scans of f(F(x,y)) - H[f(x), f(y), x, y] on the boundary set
// Gamma = ([a,b] x {b}) U ({a} x [a,b]) and on the full square, plus
// comparisons against closed forms.

#include <cstddef>
#include <optional>

#include "feqlab/expr.hpp"
#include "feqlab/problem.hpp"
#include "feqlab/tabulated.hpp"

namespace feqlab {

struct SampleTable;
struct SolveOptions;
enum class SolveStatus;

enum class ResidualDomain { gamma, square };

const char* to_string(ResidualDomain domain);

struct ResidualReport {
  ResidualDomain domain = ResidualDomain::gamma;
  std::size_t grid_n = 0;
  double sup = 0.0;
  double mean = 0.0;
  double argmax_x = 0.0;
  double argmax_y = 0.0;
  // Residual with f taken from propagated samples instead of the grid;
  // present only when a sample table was supplied.
  std::optional<double> sup_at_samples;
};

/// Sup and mean residual over {(a,t)} U {(t,b)}, t on the uniform grid. These
/// points are a subset of the residual_on_square grid for the same grid_n.
ResidualReport residual_on_gamma(const TabulatedFunction& f, const Problem& problem,
                                 std::size_t grid_n,
                                 const SampleTable* samples = nullptr);

/// Sup and mean residual over the (grid_n+1)^2 grid on I^2.
ResidualReport residual_on_square(const TabulatedFunction& f, const Problem& problem,
                                  std::size_t grid_n,
                                  const SampleTable* samples = nullptr);

struct ClosedFormComparison {
  double sup_err = 0.0;
  double argmax = 0.0;
};

/// sup over f's grid of |f(z) - g(z)|, g over {z}.
ClosedFormComparison compare_closed_form(const TabulatedFunction& f, const Expr& g);

/// Tabulates g over {z} on the uniform grid.
TabulatedFunction tabulate(const Expr& g, const Interval& interval, std::size_t grid_n);

struct BoundaryCheck {
  double error_a = 0.0;  // |f(a) - A|
  double error_b = 0.0;  // |f(b) - B|
  bool ok = false;
};

BoundaryCheck check_boundary(const TabulatedFunction& f, const Problem& problem, double tol);

/// Gamma-solvable but not solvable on I^2: square sup >= 1e3 * gamma sup and
/// square sup >= 1e-3 * value_scale.
bool is_overdetermined(const ResidualReport& gamma, const ResidualReport& square,
                       double value_scale);

struct CrossValidation {
  double sup_diff = 0.0;
  SolveStatus first;
  SolveStatus second;
};

/// Solves with map-1-first and with map-2-first frontier order and returns the
/// sup grid difference of the two reconstructions. Throws if the hypotheses
/// fail.
CrossValidation cross_validate(const Problem& problem, const SolveOptions& options);

}  // namespace feqlab
