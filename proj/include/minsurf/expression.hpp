#pragma once

// Complex-analytic expressions in one variable z: AST, evaluation, printing
// and exact symbolic differentiation.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "minsurf/error.hpp"

namespace minsurf {

using Complex = std::complex<double>;

/// Result of evaluating an expression: a finite value, or nullopt when the
/// expression hits a pole (division by ~0, log 0) or overflows.
using Evaluation = std::optional<Complex>;

inline constexpr double kPoleModulus = 1e-300;

inline bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

enum class NodeKind : std::uint8_t {
  Variable,
  Constant,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Exp,
  Log,
  Sin,
  Cos,
  Sinh,
  Cosh,
};

inline constexpr int arity(NodeKind k) {
  switch (k) {
    case NodeKind::Variable:
    case NodeKind::Constant: return 0;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    default: return 1;
  }
}

inline const char* function_name(NodeKind k) {
  switch (k) {
    case NodeKind::Exp: return "exp";
    case NodeKind::Log: return "log";
    case NodeKind::Sin: return "sin";
    case NodeKind::Cos: return "cos";
    case NodeKind::Sinh: return "sinh";
    case NodeKind::Cosh: return "cosh";
    default: return nullptr;
  }
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Constant;
  Complex value{};   // Constant only
  int exponent = 0;  // Pow only
  std::array<NodePtr, 2> child{};
};

/// Immutable expression tree. Copies share structure; safe to evaluate
/// concurrently.
class Expression {
 public:
  Expression() : Expression(constant(Complex{0.0, 0.0})) {}

  static Expression variable() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    return Expression(std::move(n));
  }

  static Expression constant(Complex c) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = c;
    return Expression(std::move(n));
  }

  NodeKind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }
  Expression child(int i) const { return Expression(node_->child[static_cast<std::size_t>(i)]); }
  Complex constant_value() const { return node_->value; }
  int exponent() const { return node_->exponent; }
  bool is_constant() const { return node_->kind == NodeKind::Constant; }
  bool is_constant(Complex c) const { return is_constant() && node_->value == c; }

  friend bool operator==(const Expression& a, const Expression& b) { return equal(*a.node_, *b.node_); }

  // Builders. Subtrees that are entirely constant are folded, and trivial
  // identities (x+0, x*1, 0*x, x^1, x^0) are removed.
  static Expression add(const Expression& a, const Expression& b);
  static Expression sub(const Expression& a, const Expression& b);
  static Expression mul(const Expression& a, const Expression& b);
  static Expression div(const Expression& a, const Expression& b);
  static Expression pow(const Expression& base, int exponent);
  static Expression neg(const Expression& a);
  static Expression apply(NodeKind fn, const Expression& a);

  /// Node builders without folding, for callers that need an exact shape.
  static Expression raw_binary(NodeKind k, const Expression& a, const Expression& b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->child = {a.node_, b.node_};
    return Expression(std::move(n));
  }
  static Expression raw_unary(NodeKind k, const Expression& a, int exponent = 0) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->exponent = exponent;
    n->child = {a.node_, nullptr};
    return Expression(std::move(n));
  }

 private:
  explicit Expression(NodePtr n) : node_(std::move(n)) {}

  static bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case NodeKind::Variable: return true;
      case NodeKind::Constant: return a.value == b.value;
      case NodeKind::Pow: return a.exponent == b.exponent && equal(*a.child[0], *b.child[0]);
      default: break;
    }
    for (int i = 0; i < arity(a.kind); ++i) {
      if (!equal(*a.child[static_cast<std::size_t>(i)], *b.child[static_cast<std::size_t>(i)])) return false;
    }
    return true;
  }

  NodePtr node_;
};

namespace detail {

inline Evaluation checked(Complex c) {
  if (!is_finite(c)) return std::nullopt;
  return c;
}

inline Evaluation int_pow(Complex base, int n) {
  if (n == 0) return Complex{1.0, 0.0};
  if (n < 0 && std::abs(base) < kPoleModulus) return std::nullopt;
  unsigned m = n < 0 ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
  Complex result{1.0, 0.0};
  Complex b = base;
  while (m != 0) {
    if (m & 1u) result *= b;
    m >>= 1u;
    if (m != 0) b *= b;
  }
  if (n < 0) {
    if (std::abs(result) < kPoleModulus) return std::nullopt;
    result = Complex{1.0, 0.0} / result;
  }
  return checked(result);
}

inline Evaluation eval_node(const Node& n, Complex z) {
  switch (n.kind) {
    case NodeKind::Variable: return z;
    case NodeKind::Constant: return n.value;
    default: break;
  }
  const Evaluation a = eval_node(*n.child[0], z);
  if (!a) return std::nullopt;
  if (arity(n.kind) == 2) {
    const Evaluation b = eval_node(*n.child[1], z);
    if (!b) return std::nullopt;
    switch (n.kind) {
      case NodeKind::Add: return checked(*a + *b);
      case NodeKind::Sub: return checked(*a - *b);
      case NodeKind::Mul: return checked(*a * *b);
      case NodeKind::Div:
        if (std::abs(*b) < kPoleModulus) return std::nullopt;
        return checked(*a / *b);
      default: return std::nullopt;
    }
  }
  switch (n.kind) {
    case NodeKind::Pow: return int_pow(*a, n.exponent);
    case NodeKind::Neg: return -*a;
    case NodeKind::Exp: return checked(std::exp(*a));
    case NodeKind::Log:
      if (std::abs(*a) < kPoleModulus) return std::nullopt;
      return checked(std::log(*a));
    case NodeKind::Sin: return checked(std::sin(*a));
    case NodeKind::Cos: return checked(std::cos(*a));
    case NodeKind::Sinh: return checked(std::sinh(*a));
    case NodeKind::Cosh: return checked(std::cosh(*a));
    default: return std::nullopt;
  }
}

}  // namespace detail

inline Evaluation evaluate(const Expression& e, Complex z) { return detail::eval_node(e.node(), z); }

inline Expression Expression::add(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return raw_binary(NodeKind::Add, a, b);
}

inline Expression Expression::sub(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return neg(b);
  return raw_binary(NodeKind::Sub, a, b);
}

inline Expression Expression::mul(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return raw_binary(NodeKind::Mul, a, b);
}

inline Expression Expression::div(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant() && std::abs(b.constant_value()) >= kPoleModulus) {
    const Complex q = a.constant_value() / b.constant_value();
    if (is_finite(q)) return constant(q);
  }
  if (b.is_constant(1.0)) return a;
  return raw_binary(NodeKind::Div, a, b);
}

inline Expression Expression::pow(const Expression& base, int exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    if (auto v = detail::int_pow(base.constant_value(), exponent)) return constant(*v);
  }
  return raw_unary(NodeKind::Pow, base, exponent);
}

inline Expression Expression::neg(const Expression& a) {
  if (a.is_constant()) return constant(-a.constant_value());
  return raw_unary(NodeKind::Neg, a);
}

inline Expression Expression::apply(NodeKind fn, const Expression& a) {
  if (a.is_constant()) {
    Node probe;
    probe.kind = fn;
    probe.child[0] = a.node_;
    if (auto v = detail::eval_node(probe, Complex{})) return constant(*v);
  }
  return raw_unary(fn, a);
}

inline Expression operator+(const Expression& a, const Expression& b) { return Expression::add(a, b); }
inline Expression operator-(const Expression& a, const Expression& b) { return Expression::sub(a, b); }
inline Expression operator*(const Expression& a, const Expression& b) { return Expression::mul(a, b); }
inline Expression operator/(const Expression& a, const Expression& b) { return Expression::div(a, b); }
inline Expression operator-(const Expression& a) { return Expression::neg(a); }

/// Exact complex derivative d/dz. The result is not simplified beyond
/// constant folding.
inline Expression differentiate(const Expression& e) {
  using E = Expression;
  switch (e.kind()) {
    case NodeKind::Variable: return E::constant(1.0);
    case NodeKind::Constant: return E::constant(0.0);
    default: break;
  }
  const E a = e.child(0);
  const E da = differentiate(a);
  switch (e.kind()) {
    case NodeKind::Add: return da + differentiate(e.child(1));
    case NodeKind::Sub: return da - differentiate(e.child(1));
    case NodeKind::Mul: {
      const E b = e.child(1);
      return da * b + a * differentiate(b);
    }
    case NodeKind::Div: {
      const E b = e.child(1);
      return (da * b - a * differentiate(b)) / E::pow(b, 2);
    }
    case NodeKind::Pow:
      return E::constant(static_cast<double>(e.exponent())) * E::pow(a, e.exponent() - 1) * da;
    case NodeKind::Neg: return -da;
    case NodeKind::Exp: return e * da;
    case NodeKind::Log: return da / a;
    case NodeKind::Sin: return E::apply(NodeKind::Cos, a) * da;
    case NodeKind::Cos: return -(E::apply(NodeKind::Sin, a) * da);
    case NodeKind::Sinh: return E::apply(NodeKind::Cosh, a) * da;
    case NodeKind::Cosh: return E::apply(NodeKind::Sinh, a) * da;
    default: break;
  }
  throw Error("differentiate: malformed expression node");
}

// ---------------------------------------------------------------------------
// Printing. The output is accepted by parse() and reproduces the same tree.

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Binding strength used to decide where parentheses are needed.
enum Precedence : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

inline int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return kSum;
    case NodeKind::Mul:
    case NodeKind::Div: return kProduct;
    case NodeKind::Neg: return kUnary;
    case NodeKind::Pow: return kPower;
    default: return kAtom;
  }
}

inline std::string format_constant(Complex c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) {
    if (re >= 0.0 && !std::signbit(re)) return format_real(re);
    return "(" + format_real(re) + ")";
  }
  std::string imag_part = std::abs(im) == 1.0 ? "i" : format_real(std::abs(im)) + "*i";
  if (re == 0.0 && !std::signbit(re)) {
    if (im > 0.0) return im == 1.0 ? "i" : "(" + imag_part + ")";
    return "(-" + imag_part + ")";
  }
  return "(" + format_real(re) + (im > 0.0 ? "+" : "-") + imag_part + ")";
}

inline void print_node(const Node& n, std::string& out);

inline void print_wrapped(const Node& n, bool parens, std::string& out) {
  if (parens) out += '(';
  print_node(n, out);
  if (parens) out += ')';
}

inline void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Variable: out += 'z'; return;
    case NodeKind::Constant: out += format_constant(n.value); return;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      const int p = precedence(n);
      print_wrapped(*n.child[0], precedence(*n.child[0]) < p, out);
      switch (n.kind) {
        case NodeKind::Add: out += " + "; break;
        case NodeKind::Sub: out += " - "; break;
        case NodeKind::Mul: out += "*"; break;
        default: out += "/"; break;
      }
      print_wrapped(*n.child[1], precedence(*n.child[1]) <= p, out);
      return;
    }
    case NodeKind::Pow:
      print_wrapped(*n.child[0], precedence(*n.child[0]) <= kPower, out);
      out += '^';
      if (n.exponent < 0) {
        out += "(" + std::to_string(n.exponent) + ")";
      } else {
        out += std::to_string(n.exponent);
      }
      return;
    case NodeKind::Neg:
      out += '-';
      print_wrapped(*n.child[0], precedence(*n.child[0]) < kUnary, out);
      return;
    default:
      out += function_name(n.kind);
      out += '(';
      print_node(*n.child[0], out);
      out += ')';
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Expression& e) {
  std::string out;
  detail::print_node(e.node(), out);
  return out;
}

}  // namespace minsurf
