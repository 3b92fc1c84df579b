#include "feqlab/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <system_error>

namespace feqlab {

// ---------------------------------------------------------------------------
// Variable sets

VariableSet::VariableSet(std::initializer_list<std::string_view> names) {
  for (auto name : names) names_.emplace_back(name);
}

std::optional<std::size_t> VariableSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

const VariableSet& f_variables() {
  static const VariableSet set{"x", "y"};
  return set;
}

const VariableSet& h_variables() {
  static const VariableSet set{"u", "v", "x", "y"};
  return set;
}

const VariableSet& closed_form_variables() {
  static const VariableSet set{"z"};
  return set;
}

// ---------------------------------------------------------------------------
// Errors

ExprError::ExprError(Kind kind, std::string message,
                     std::optional<std::size_t> offset, std::string subject)
    : Error(std::move(message)),
      kind_(kind),
      offset_(offset),
      subject_(std::move(subject)) {}

const char* to_string(ExprError::Kind kind) {
  switch (kind) {
    case ExprError::Kind::lexical: return "lexical error";
    case ExprError::Kind::syntax: return "syntax error";
    case ExprError::Kind::undeclared_variable: return "undeclared variable";
    case ExprError::Kind::unknown_function: return "unknown function";
    case ExprError::Kind::arity: return "arity error";
    case ExprError::Kind::domain: return "domain error";
    case ExprError::Kind::non_finite: return "non-finite result";
  }
  return "expression error";
}

namespace {

[[noreturn]] void fail_at(ExprError::Kind kind, std::size_t offset,
                          const std::string& what, std::string subject = {}) {
  throw ExprError(kind,
                  std::string(to_string(kind)) + " at offset " +
                      std::to_string(offset) + ": " + what,
                  offset, std::move(subject));
}

}  // namespace

// ---------------------------------------------------------------------------
// Builtins

namespace {

struct BuiltinInfo {
  Builtin fn;
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<BuiltinInfo, 10> kBuiltins{{
    {Builtin::sin, "sin", 1},
    {Builtin::cos, "cos", 1},
    {Builtin::exp, "exp", 1},
    {Builtin::ln, "ln", 1},
    {Builtin::sqrt, "sqrt", 1},
    {Builtin::abs, "abs", 1},
    {Builtin::min, "min", 2},
    {Builtin::max, "max", 2},
    {Builtin::pow, "pow", 2},
    {Builtin::logmean, "logmean", 2},
}};

const BuiltinInfo& info(Builtin fn) {
  return kBuiltins[static_cast<std::size_t>(fn)];
}

}  // namespace

std::string_view builtin_name(Builtin fn) { return info(fn).name; }
std::size_t builtin_arity(Builtin fn) { return info(fn).arity; }

std::optional<Builtin> lookup_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return b.fn;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction and equality

Expr Expr::constant(double value) {
  return Expr(std::make_shared<const Node>(Node{Node::Constant{value}}));
}

Expr Expr::variable(std::string name, std::size_t slot) {
  return Expr(
      std::make_shared<const Node>(Node{Node::Variable{std::move(name), slot}}));
}

Expr Expr::negate(Expr operand) {
  return Expr(std::make_shared<const Node>(Node{Node::Negate{std::move(operand)}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(
      Node{Node::Binary{op, std::move(lhs), std::move(rhs)}}));
}

Expr Expr::call(Builtin fn, std::vector<Expr> args) {
  if (args.size() != builtin_arity(fn)) {
    throw ExprError(ExprError::Kind::arity,
                    std::string(builtin_name(fn)) + " expects " +
                        std::to_string(builtin_arity(fn)) + " argument(s)",
                    std::nullopt, std::string(builtin_name(fn)));
  }
  return Expr(
      std::make_shared<const Node>(Node{Node::Call{fn, std::move(args)}}));
}

bool operator==(const Expr& lhs, const Expr& rhs) {
  if (lhs.node_ == rhs.node_) return true;
  const auto& a = lhs.node().data;
  const auto& b = rhs.node().data;
  if (a.index() != b.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, Node::Constant>) {
          // Bitwise: distinguishes 0 from -0 and never equates NaNs loosely.
          return std::bit_cast<std::uint64_t>(x.value) ==
                 std::bit_cast<std::uint64_t>(y.value);
        } else if constexpr (std::is_same_v<T, Node::Variable>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Node::Negate>) {
          return x.operand == y.operand;
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        } else {
          return x.fn == y.fn && x.args == y.args;
        }
      },
      a);
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    const char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c)) {
      while (i < n && is_digit(source[i])) ++i;
      if (i < n && source[i] == '.') {
        ++i;
        while (i < n && is_digit(source[i])) ++i;
      }
      if (i < n && (source[i] == 'e' || source[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (source[j] == '+' || source[j] == '-')) ++j;
        if (j >= n || !is_digit(source[j])) {
          fail_at(ExprError::Kind::lexical, j, "malformed exponent");
        }
        while (j < n && is_digit(source[j])) ++j;
        i = j;
      }
      double value = 0.0;
      const auto* first = source.data() + start;
      const auto* last = source.data() + i;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        fail_at(ExprError::Kind::lexical, start,
                "number '" + std::string(first, last) + "' is not a finite literal");
      }
      tokens.push_back({TokenKind::number, std::string(first, last), start});
    } else if (is_ident_start(c)) {
      while (i < n && is_ident_char(source[i])) ++i;
      tokens.push_back(
          {TokenKind::identifier, std::string(source.substr(start, i - start)), start});
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      tokens.push_back({TokenKind::op, std::string(1, c), start});
      ++i;
    } else if (c == '(') {
      tokens.push_back({TokenKind::left_paren, "(", start});
      ++i;
    } else if (c == ')') {
      tokens.push_back({TokenKind::right_paren, ")", start});
      ++i;
    } else if (c == ',') {
      tokens.push_back({TokenKind::comma, ",", start});
      ++i;
    } else {
      fail_at(ExprError::Kind::lexical, start, "unexpected character");
    }
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view source, const VariableSet& variables)
      : tokens_(tokenize(source)), end_offset_(source.size()), vars_(variables) {}

  Expr parse_all() {
    Expr e = expr();
    if (!at_end()) unexpected();
    return e;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }

  bool peek_op(char op) const {
    return !at_end() && peek().kind == TokenKind::op && peek().lexeme[0] == op;
  }
  bool peek_kind(TokenKind kind) const {
    return !at_end() && peek().kind == kind;
  }

  [[noreturn]] void unexpected() const {
    if (at_end()) {
      fail_at(ExprError::Kind::syntax, end_offset_, "unexpected end of input");
    }
    fail_at(ExprError::Kind::syntax, peek().position,
            "unexpected token '" + peek().lexeme + "'");
  }

  void expect(TokenKind kind) {
    if (!peek_kind(kind)) unexpected();
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    while (peek_op('+') || peek_op('-')) {
      const auto op = static_cast<BinaryOp>(tokens_[pos_++].lexeme[0]);
      lhs = Expr::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (peek_op('*') || peek_op('/')) {
      const auto op = static_cast<BinaryOp>(tokens_[pos_++].lexeme[0]);
      lhs = Expr::binary(op, std::move(lhs), factor());
    }
    return lhs;
  }

  Expr factor() {
    if (peek_op('-')) {
      ++pos_;
      return Expr::negate(factor());
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (peek_op('^')) {
      ++pos_;
      return Expr::binary(BinaryOp::pow, std::move(base), factor());
    }
    return base;
  }

  Expr atom() {
    if (at_end()) unexpected();
    const Token& tok = peek();
    switch (tok.kind) {
      case TokenKind::number: {
        ++pos_;
        double value = 0.0;
        std::from_chars(tok.lexeme.data(), tok.lexeme.data() + tok.lexeme.size(),
                        value);
        return Expr::constant(value);
      }
      case TokenKind::identifier: {
        ++pos_;
        if (peek_kind(TokenKind::left_paren)) return call(tok);
        const auto slot = vars_.index_of(tok.lexeme);
        if (!slot) {
          fail_at(ExprError::Kind::undeclared_variable, tok.position,
                  "'" + tok.lexeme + "' is not a declared variable", tok.lexeme);
        }
        return Expr::variable(tok.lexeme, *slot);
      }
      case TokenKind::left_paren: {
        ++pos_;
        Expr inner = expr();
        expect(TokenKind::right_paren);
        return inner;
      }
      default:
        unexpected();
    }
  }

  Expr call(const Token& name) {
    const auto fn = lookup_builtin(name.lexeme);
    if (!fn) {
      fail_at(ExprError::Kind::unknown_function, name.position,
              "'" + name.lexeme + "' is not a builtin function", name.lexeme);
    }
    expect(TokenKind::left_paren);
    std::vector<Expr> args;
    args.push_back(expr());
    while (peek_kind(TokenKind::comma)) {
      ++pos_;
      args.push_back(expr());
    }
    expect(TokenKind::right_paren);
    if (args.size() != builtin_arity(*fn)) {
      fail_at(ExprError::Kind::arity, name.position,
              name.lexeme + " expects " + std::to_string(builtin_arity(*fn)) +
                  " argument(s), got " + std::to_string(args.size()),
              name.lexeme);
    }
    return Expr::call(*fn, std::move(args));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_offset_;
  const VariableSet& vars_;
};

}  // namespace

Expr parse(std::string_view source, const VariableSet& variables) {
  return Parser(source, variables).parse_all();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

void print_to(const Expr& expr, std::string& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Node::Constant>) {
          std::array<char, 64> buf{};
          auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
          out.append(buf.data(), ptr);
        } else if constexpr (std::is_same_v<T, Node::Variable>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Node::Negate>) {
          out += "(-";
          print_to(n.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          out += '(';
          print_to(n.lhs, out);
          out += ' ';
          out += static_cast<char>(n.op);
          out += ' ';
          print_to(n.rhs, out);
          out += ')';
        } else {
          out += builtin_name(n.fn);
          out += '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            print_to(n.args[i], out);
          }
          out += ')';
        }
      },
      expr.node().data);
}

}  // namespace

std::string print(const Expr& expr) {
  std::string out;
  print_to(expr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

double logmean(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw ExprError(ExprError::Kind::domain,
                    "domain error: logmean requires positive arguments");
  }
  if (p == q) return p;
  // p * x / ln(1 + x) with x = q/p - 1 equals (q - p) / (ln q - ln p) and
  // stays accurate when p and q are close.
  const double x = (q - p) / p;
  if (x == 0.0) return p;
  return p * (x / std::log1p(x));
}

namespace {

double checked(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw ExprError(ExprError::Kind::non_finite,
                    std::string("non-finite result in ") + what);
  }
  return value;
}

double checked_pow(double base, double exponent) {
  if (base < 0.0 && std::trunc(exponent) != exponent) {
    throw ExprError(ExprError::Kind::domain,
                    "domain error: negative base with non-integer exponent");
  }
  return checked(std::pow(base, exponent), "power");
}

template <class Lookup>
double eval_node(const Expr& expr, const Lookup& lookup) {
  return std::visit(
      [&lookup](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Node::Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Node::Variable>) {
          return checked(lookup(n), "variable binding");
        } else if constexpr (std::is_same_v<T, Node::Negate>) {
          return -eval_node(n.operand, lookup);
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          const double l = eval_node(n.lhs, lookup);
          const double r = eval_node(n.rhs, lookup);
          switch (n.op) {
            case BinaryOp::add: return checked(l + r, "addition");
            case BinaryOp::sub: return checked(l - r, "subtraction");
            case BinaryOp::mul: return checked(l * r, "multiplication");
            case BinaryOp::div: return checked(l / r, "division");
            case BinaryOp::pow: return checked_pow(l, r);
          }
          return 0.0;
        } else {
          const double a = eval_node(n.args[0], lookup);
          switch (n.fn) {
            case Builtin::sin: return std::sin(a);
            case Builtin::cos: return std::cos(a);
            case Builtin::exp: return checked(std::exp(a), "exp");
            case Builtin::ln:
              if (a < 0.0) {
                throw ExprError(ExprError::Kind::domain,
                                "domain error: ln of a negative number");
              }
              return checked(std::log(a), "ln");
            case Builtin::sqrt:
              if (a < 0.0) {
                throw ExprError(ExprError::Kind::domain,
                                "domain error: sqrt of a negative number");
              }
              return std::sqrt(a);
            case Builtin::abs: return std::abs(a);
            case Builtin::min: return std::min(a, eval_node(n.args[1], lookup));
            case Builtin::max: return std::max(a, eval_node(n.args[1], lookup));
            case Builtin::pow: return checked_pow(a, eval_node(n.args[1], lookup));
            case Builtin::logmean: return logmean(a, eval_node(n.args[1], lookup));
          }
          return 0.0;
        }
      },
      expr.node().data);
}

}  // namespace

double eval(const Expr& expr, const Env& env) {
  return eval_node(expr, [&env](const Node::Variable& v) {
    auto it = env.find(v.name);
    if (it == env.end()) {
      throw ExprError(ExprError::Kind::undeclared_variable,
                      "variable '" + v.name + "' is not bound", std::nullopt,
                      v.name);
    }
    return it->second;
  });
}

double eval(const Expr& expr, std::span<const double> slots) {
  return eval_node(expr, [slots](const Node::Variable& v) {
    if (v.slot >= slots.size()) {
      throw ExprError(ExprError::Kind::undeclared_variable,
                      "variable '" + v.name + "' has no bound slot", std::nullopt,
                      v.name);
    }
    return slots[v.slot];
  });
}

}  // namespace feqlab
