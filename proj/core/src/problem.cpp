#include "feqlab/problem.hpp"

#include <algorithm>
#include <cmath>

namespace feqlab {

double Problem::value_scale() const {
  return std::max({1.0, std::abs(boundary_a), std::abs(boundary_b)});
}

Problem make_problem(std::string name, std::string_view f_source,
                     std::string_view h_source, double a, double b, double A,
                     double B) {
  if (!std::isfinite(A) || !std::isfinite(B)) {
    throw InvalidArgument("boundary values must be finite");
  }
  return Problem{std::move(name), Interval(a, b), parse(f_source, f_variables()),
                 parse(h_source, h_variables()), A, B};
}

}  // namespace feqlab
