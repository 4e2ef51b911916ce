#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fieldsplit {

/// Evaluation point: coordinate name -> real value.
using Bindings = std::map<std::string, double>;

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset, std::string expected)
      : std::runtime_error(msg + " at offset " + std::to_string(offset) +
                           " (expected " + expected + ")"),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

class EvalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SemanticError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Immutable expression tree over named real coordinates.
///
/// Construction goes through the factory functions below, which apply light
/// structural simplification (constant folding, 0+e, 1*e, 0*e, e^1, double
/// negation) but no canonicalization.
class Expr {
public:
  enum class Kind { Constant, Variable, Unary, Binary };
  enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt };
  enum class BinaryOp { Add, Sub, Mul, Div, Pow };

  /// Zero constant.
  Expr();

  static Expr constant(double v);
  static Expr variable(std::string name);
  static Expr unary(UnaryOp op, const Expr& e);
  static Expr binary(BinaryOp op, const Expr& l, const Expr& r);

  Kind kind() const;
  double value() const;             // Constant only
  const std::string& name() const;  // Variable only
  UnaryOp unary_op() const;
  Expr operand() const;
  BinaryOp binary_op() const;
  Expr lhs() const;
  Expr rhs() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(double v) const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& e);
Expr pow(const Expr& a, const Expr& b);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

/// True iff `name` matches [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view name);

/// Double-precision evaluation. Throws EvalError on an unbound variable
/// (naming it) or a non-finite intermediate result (printing the offending
/// subexpression).
double evaluate(const Expr& e, const Bindings& b);

/// Partial derivative with respect to `var`; other variables are constants.
Expr differentiate(const Expr& e, const std::string& var);

/// Simultaneous substitution: every occurrence of each mapped variable in the
/// original tree is replaced; replacements are not re-substituted.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& subs);

std::set<std::string> free_variables(const Expr& e);

/// Fully parenthesized printer; constants with 17 significant digits.
/// parse_expr(to_string(e)) == e for any e produced by the factories.
std::string to_string(const Expr& e);

/// Recursive-descent parser for the expression grammar.
/// Precedence, tightest first: ^ (right-associative), unary minus, * /, + -.
/// Recognized functions: sin, cos, exp, log, sqrt.
Expr parse_expr(std::string_view text);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace fieldsplit
