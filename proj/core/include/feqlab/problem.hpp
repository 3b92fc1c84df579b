#pragma once

#include <string>
#include <string_view>

#include "feqlab/expr.hpp"
#include "feqlab/interval.hpp"

namespace feqlab {

/// One instance of f(F(x,y)) = H[f(x), f(y), x, y] on [a,b] with f(a) = A and
/// f(b) = B.
struct Problem {
  std::string name;
  Interval interval;
  Expr f;  // over {x, y}
  Expr h;  // over {u, v, x, y}
  double boundary_a;  // A = f(a)
  double boundary_b;  // B = f(b)

  /// max(1, |A|, |B|), the scale used for value tolerances.
  double value_scale() const;

  bool operator==(const Problem&) const = default;
};

/// Parses F and H from source text and assembles a problem.
Problem make_problem(std::string name, std::string_view f_source,
                     std::string_view h_source, double a, double b, double A,
                     double B);

}  // namespace feqlab
