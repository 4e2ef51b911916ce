#include "fieldsplit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fieldsplit {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::string name;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Expr::Expr() {
  static const auto zero = std::make_shared<Node>();
  node_ = zero;
}

Expr Expr::constant(double v) {
  if (v == 0.0) return Expr();  // normalizes -0.0 as well
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  if (!is_identifier(name)) throw SemanticError("invalid identifier: '" + name + "'");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, const Expr& e) {
  if (e.is_constant()) {
    double x = e.value();
    double r;
    switch (op) {
      case UnaryOp::Neg: r = -x; break;
      case UnaryOp::Sin: r = std::sin(x); break;
      case UnaryOp::Cos: r = std::cos(x); break;
      case UnaryOp::Exp: r = std::exp(x); break;
      case UnaryOp::Log: r = std::log(x); break;
      case UnaryOp::Sqrt: r = std::sqrt(x); break;
    }
    if (std::isfinite(r)) return constant(r);
  }
  if (op == UnaryOp::Neg && e.kind() == Kind::Unary && e.unary_op() == UnaryOp::Neg)
    return e.operand();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->a = e.node_;
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, const Expr& l, const Expr& r) {
  if (l.is_constant() && r.is_constant()) {
    double x = l.value(), y = r.value(), v;
    switch (op) {
      case BinaryOp::Add: v = x + y; break;
      case BinaryOp::Sub: v = x - y; break;
      case BinaryOp::Mul: v = x * y; break;
      case BinaryOp::Div: v = x / y; break;
      case BinaryOp::Pow: v = std::pow(x, y); break;
    }
    if (std::isfinite(v)) return constant(v);
  }
  switch (op) {
    case BinaryOp::Add:
      if (l.is_constant(0.0)) return r;
      if (r.is_constant(0.0)) return l;
      break;
    case BinaryOp::Sub:
      if (r.is_constant(0.0)) return l;
      if (l.is_constant(0.0)) return unary(UnaryOp::Neg, r);
      break;
    case BinaryOp::Mul:
      if (l.is_constant(0.0) || r.is_constant(0.0)) return constant(0.0);
      if (l.is_constant(1.0)) return r;
      if (r.is_constant(1.0)) return l;
      break;
    case BinaryOp::Div:
      if (l.is_constant(0.0)) return constant(0.0);
      if (r.is_constant(1.0)) return l;
      break;
    case BinaryOp::Pow:
      if (r.is_constant(1.0)) return l;
      if (r.is_constant(0.0)) return constant(1.0);
      break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->a = l.node_;
  n->b = r.node_;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Expr::UnaryOp Expr::unary_op() const { return node_->uop; }
Expr Expr::operand() const { return Expr(node_->a); }
Expr::BinaryOp Expr::binary_op() const { return node_->bop; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }

bool Expr::is_constant(double v) const {
  return kind() == Kind::Constant && value() == v;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Constant: return a.value() == b.value();
    case Expr::Kind::Variable: return a.name() == b.name();
    case Expr::Kind::Unary:
      return a.unary_op() == b.unary_op() && a.operand() == b.operand();
    case Expr::Kind::Binary:
      return a.binary_op() == b.binary_op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::BinaryOp::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::BinaryOp::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::BinaryOp::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::BinaryOp::Div, a, b); }
Expr operator-(const Expr& e) { return Expr::unary(Expr::UnaryOp::Neg, e); }
Expr pow(const Expr& a, const Expr& b) { return Expr::binary(Expr::BinaryOp::Pow, a, b); }
Expr sin(const Expr& e) { return Expr::unary(Expr::UnaryOp::Sin, e); }
Expr cos(const Expr& e) { return Expr::unary(Expr::UnaryOp::Cos, e); }
Expr exp(const Expr& e) { return Expr::unary(Expr::UnaryOp::Exp, e); }
Expr log(const Expr& e) { return Expr::unary(Expr::UnaryOp::Log, e); }
Expr sqrt(const Expr& e) { return Expr::unary(Expr::UnaryOp::Sqrt, e); }

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name.substr(1))
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

double evaluate(const Expr& e, const Bindings& b) {
  double r;
  switch (e.kind()) {
    case Expr::Kind::Constant:
      r = e.value();
      break;
    case Expr::Kind::Variable: {
      auto it = b.find(e.name());
      if (it == b.end()) throw EvalError("unbound variable '" + e.name() + "'");
      r = it->second;
      break;
    }
    case Expr::Kind::Unary: {
      double x = evaluate(e.operand(), b);
      switch (e.unary_op()) {
        case Expr::UnaryOp::Neg: r = -x; break;
        case Expr::UnaryOp::Sin: r = std::sin(x); break;
        case Expr::UnaryOp::Cos: r = std::cos(x); break;
        case Expr::UnaryOp::Exp: r = std::exp(x); break;
        case Expr::UnaryOp::Log: r = std::log(x); break;
        case Expr::UnaryOp::Sqrt: r = std::sqrt(x); break;
      }
      break;
    }
    case Expr::Kind::Binary: {
      double x = evaluate(e.lhs(), b);
      double y = evaluate(e.rhs(), b);
      switch (e.binary_op()) {
        case Expr::BinaryOp::Add: r = x + y; break;
        case Expr::BinaryOp::Sub: r = x - y; break;
        case Expr::BinaryOp::Mul: r = x * y; break;
        case Expr::BinaryOp::Div: r = x / y; break;
        case Expr::BinaryOp::Pow: r = std::pow(x, y); break;
      }
      break;
    }
  }
  if (!std::isfinite(r))
    throw EvalError("non-finite result in subexpression " + to_string(e));
  return r;
}

Expr differentiate(const Expr& e, const std::string& var) {
  using K = Expr::Kind;
  using U = Expr::UnaryOp;
  using B = Expr::BinaryOp;
  switch (e.kind()) {
    case K::Constant:
      return Expr();
    case K::Variable:
      return e.name() == var ? Expr::constant(1.0) : Expr();
    case K::Unary: {
      Expr u = e.operand();
      Expr du = differentiate(u, var);
      switch (e.unary_op()) {
        case U::Neg: return -du;
        case U::Sin: return cos(u) * du;
        case U::Cos: return -(sin(u) * du);
        case U::Exp: return exp(u) * du;
        case U::Log: return du / u;
        case U::Sqrt: return du / (Expr::constant(2.0) * sqrt(u));
      }
      break;
    }
    case K::Binary: {
      Expr u = e.lhs(), v = e.rhs();
      Expr du = differentiate(u, var), dv = differentiate(v, var);
      switch (e.binary_op()) {
        case B::Add: return du + dv;
        case B::Sub: return du - dv;
        case B::Mul: return du * v + u * dv;
        case B::Div: return (du * v - u * dv) / (v * v);
        case B::Pow:
          if (v.is_constant()) {
            double c = v.value();
            return Expr::constant(c) * pow(u, Expr::constant(c - 1.0)) * du;
          }
          if (u.is_constant()) return e * log(u) * dv;
          // u^v with both varying
          return e * (dv * log(u) + v * du / u);
      }
      break;
    }
  }
  return Expr();
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& subs) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e;
    case Expr::Kind::Variable: {
      auto it = subs.find(e.name());
      return it != subs.end() ? it->second : e;
    }
    case Expr::Kind::Unary:
      return Expr::unary(e.unary_op(), substitute(e.operand(), subs));
    case Expr::Kind::Binary:
      return Expr::binary(e.binary_op(), substitute(e.lhs(), subs),
                          substitute(e.rhs(), subs));
  }
  return e;
}

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Constant: break;
    case Expr::Kind::Variable: out.insert(e.name()); break;
    case Expr::Kind::Unary: collect_vars(e.operand(), out); break;
    case Expr::Kind::Binary:
      collect_vars(e.lhs(), out);
      collect_vars(e.rhs(), out);
      break;
  }
}

const char* unary_name(Expr::UnaryOp op) {
  switch (op) {
    case Expr::UnaryOp::Neg: return "-";
    case Expr::UnaryOp::Sin: return "sin";
    case Expr::UnaryOp::Cos: return "cos";
    case Expr::UnaryOp::Exp: return "exp";
    case Expr::UnaryOp::Log: return "log";
    case Expr::UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

const char* binary_name(Expr::BinaryOp op) {
  switch (op) {
    case Expr::BinaryOp::Add: return "+";
    case Expr::BinaryOp::Sub: return "-";
    case Expr::BinaryOp::Mul: return "*";
    case Expr::BinaryOp::Div: return "/";
    case Expr::BinaryOp::Pow: return "^";
  }
  return "?";
}

void print_rec(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      // Negative constants are parenthesized so a printed tree reparses to
      // the same structure in every operand position.
      if (e.value() < 0.0) {
        out += "(-";
        out += format_double(-e.value());
        out += ")";
      } else {
        out += format_double(e.value());
      }
      break;
    case Expr::Kind::Variable:
      out += e.name();
      break;
    case Expr::Kind::Unary:
      if (e.unary_op() == Expr::UnaryOp::Neg) {
        out += "(-";
        print_rec(e.operand(), out);
        out += ")";
      } else {
        out += unary_name(e.unary_op());
        out += "(";
        print_rec(e.operand(), out);
        out += ")";
      }
      break;
    case Expr::Kind::Binary:
      out += "(";
      print_rec(e.lhs(), out);
      out += " ";
      out += binary_name(e.binary_op());
      out += " ";
      print_rec(e.rhs(), out);
      out += ")";
      break;
  }
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_string(const Expr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

namespace {

// Recursive-descent parser. Grammar, tightest binding last:
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" unary)?            (right-associative)
//   atom  := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected input", pos_, "end of input or operator");
    return e;
  }

private:
  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        e = e + parse_term();
      } else if (accept('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        e = e * parse_unary();
      } else if (accept('/')) {
        e = e / parse_unary();
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    skip_ws();
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", pos_, "number, identifier or '('");
    char c = text_[pos_];
    if (accept('(')) {
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id = parse_ident();
      skip_ws();
      if (accept('(')) {
        Expr::UnaryOp op;
        if (id == "sin") op = Expr::UnaryOp::Sin;
        else if (id == "cos") op = Expr::UnaryOp::Cos;
        else if (id == "exp") op = Expr::UnaryOp::Exp;
        else if (id == "log") op = Expr::UnaryOp::Log;
        else if (id == "sqrt") op = Expr::UnaryOp::Sqrt;
        else
          throw ParseError("unknown function '" + id + "'", pos_,
                           "one of sin, cos, exp, log, sqrt");
        Expr arg = parse_sum();
        expect(')');
        return Expr::unary(op, arg);
      }
      return Expr::variable(id);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_,
                     "number, identifier or '('");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError("malformed number", pos_, "digit after '.'");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // the 'e' starts an identifier, not an exponent
      }
    }
    std::string lit(text_.substr(start, pos_ - start));
    return Expr::constant(std::strtod(lit.c_str(), nullptr));
  }

  std::string parse_ident() {
    std::size_t start = pos_;
    ++pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError("missing '" + std::string(1, c) + "'", pos_, std::string(1, c));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace fieldsplit
