#pragma once

#include <stdexcept>
#include <string>

namespace feqlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluating F, H or a tabulated function failed at a specific point.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double x, double y)
      : Error(what), x_(x), y_(y) {}

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double x_;
  double y_;
};

}  // namespace feqlab
