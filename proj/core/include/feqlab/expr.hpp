#pragma once

// Arithmetic expression DSL used to write F(x,y), H(u,v,x,y) and closed-form
// reference functions f(z).
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := number | identifier | identifier "(" expr ("," expr)* ")"
//           | "(" expr ")"

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "feqlab/error.hpp"

namespace feqlab {

enum class TokenKind { number, identifier, op, left_paren, right_paren, comma };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;  // 0-based byte offset into the source

  bool operator==(const Token&) const = default;
};

/// Ordered set of variable names an expression may reference. The position of
/// a name is the slot used by the fast evaluation path.
class VariableSet {
 public:
  VariableSet(std::initializer_list<std::string_view> names);

  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
};

/// {x, y}: variables of the inner map F.
const VariableSet& f_variables();
/// {u, v, x, y}: variables of the outer map H.
const VariableSet& h_variables();
/// {z}: variable of closed-form reference functions.
const VariableSet& closed_form_variables();

class ExprError : public Error {
 public:
  enum class Kind {
    lexical,
    syntax,
    undeclared_variable,
    unknown_function,
    arity,
    domain,
    non_finite,
  };

  ExprError(Kind kind, std::string message,
            std::optional<std::size_t> offset = std::nullopt,
            std::string subject = {});

  Kind kind() const noexcept { return kind_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }
  // Offending identifier for undeclared-variable/unknown-function/arity.
  const std::string& subject() const noexcept { return subject_; }

 private:
  Kind kind_;
  std::optional<std::size_t> offset_;
  std::string subject_;
};

const char* to_string(ExprError::Kind kind);

enum class BinaryOp : char { add = '+', sub = '-', mul = '*', div = '/', pow = '^' };

enum class Builtin { sin, cos, exp, ln, sqrt, abs, min, max, pow, logmean };

std::string_view builtin_name(Builtin fn);
std::size_t builtin_arity(Builtin fn);
std::optional<Builtin> lookup_builtin(std::string_view name);

struct Node;

/// Immutable, shareable handle to an expression tree. Equality is structural.
class Expr {
 public:
  static Expr constant(double value);
  static Expr variable(std::string name, std::size_t slot);
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Builtin fn, std::vector<Expr> args);

  const Node& node() const { return *node_; }

  friend bool operator==(const Expr& lhs, const Expr& rhs);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  struct Constant {
    double value;
  };
  struct Variable {
    std::string name;
    std::size_t slot;
  };
  struct Negate {
    Expr operand;
  };
  struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
  };
  struct Call {
    Builtin fn;
    std::vector<Expr> args;
  };

  std::variant<Constant, Variable, Negate, Binary, Call> data;
};

std::vector<Token> tokenize(std::string_view source);

/// Parses `source`; every identifier used as a variable must be in `variables`.
Expr parse(std::string_view source, const VariableSet& variables);

/// Fully parenthesized canonical text; parse(print(e)) == e.
std::string print(const Expr& expr);

using Env = std::map<std::string, double, std::less<>>;

/// Evaluates with variables bound by name.
double eval(const Expr& expr, const Env& env);

/// Evaluates with variables bound by slot, as assigned at parse time.
double eval(const Expr& expr, std::span<const double> slots);

/// Continuous extension of (p - q) / (ln p - ln q) to the diagonal.
double logmean(double p, double q);

}  // namespace feqlab
