#pragma once

// Recursive-descent parser for expressions in z.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative via unary
//   primary := number | 'z' | 'i' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | sin | cos | sinh | cosh
//
// An exponent must fold to a constant. With a non-constant base it must also
// be an integer; a constant base takes the principal power.

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "minsurf/error.hpp"
#include "minsurf/expression.hpp"

namespace minsurf {

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse_all() {
    Expression e = parse_expr();
    skip_space();
    if (pos_ < text_.size()) fail(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] static void fail(std::size_t at, const std::string& msg) { throw ParseError(at, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression parse_expr() {
    Expression lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + parse_term();
      } else if (accept('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Expression parse_term() {
    Expression lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * parse_unary();
      } else if (accept('/')) {
        lhs = lhs / parse_unary();
      } else {
        return lhs;
      }
    }
  }

  Expression parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t exp_at = pos_;
    const Expression exponent = parse_unary();
    if (!exponent.is_constant()) fail(exp_at, "exponent must be a constant");
    const Complex p = exponent.constant_value();
    const bool integral = p.imag() == 0.0 && std::nearbyint(p.real()) == p.real() && std::abs(p.real()) < 1e9;
    if (integral) return Expression::pow(base, static_cast<int>(p.real()));
    if (!base.is_constant()) fail(exp_at, "non-integer exponent applied to a non-constant base");
    const Complex v = std::pow(base.constant_value(), p);
    if (!is_finite(v)) fail(exp_at, "constant power is not finite");
    return Expression::constant(v);
  }

  Expression parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = parse_expr();
      if (!accept(')')) fail(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(pos_, std::string("unexpected character '") + c + "'");
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    // Exponent part only when a digit follows, so "2e" is not swallowed.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) fail(start, "malformed number");
    return Expression::constant(value);
  }

  Expression parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "z") return Expression::variable();
    if (name == "i") return Expression::constant(Complex{0.0, 1.0});
    if (name == "pi") return Expression::constant(std::numbers::pi);
    if (name == "e") return Expression::constant(std::numbers::e);

    static constexpr std::pair<std::string_view, NodeKind> functions[] = {
        {"exp", NodeKind::Exp}, {"log", NodeKind::Log},   {"sin", NodeKind::Sin},
        {"cos", NodeKind::Cos}, {"sinh", NodeKind::Sinh}, {"cosh", NodeKind::Cosh},
    };
    for (const auto& [fname, kind] : functions) {
      if (name != fname) continue;
      if (!accept('(')) fail(pos_, "expected '(' after " + std::string(name));
      Expression arg = parse_expr();
      if (!accept(')')) fail(pos_, "expected ')'");
      return Expression::apply(kind, arg);
    }
    fail(start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse expression text over the variable z. Throws ParseError.
inline Expression parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace minsurf
