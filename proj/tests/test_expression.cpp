#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "minsurf/catalog.hpp"
#include "minsurf/expression.hpp"
#include "minsurf/parser.hpp"
#include "oracles.hpp"

using namespace minsurf;
using C = std::complex<double>;

namespace {

Expression z() { return Expression::variable(); }
Expression k(C c) { return Expression::constant(c); }

}  // namespace

TEST(Parse, Variable) { EXPECT_EQ(parse("z").kind(), NodeKind::Variable); }

TEST(Parse, QuotientShape) {
  const Expression e = parse("(1 - z^2)/2");
  ASSERT_EQ(e.kind(), NodeKind::Div);
  EXPECT_TRUE(e.child(1).is_constant(2.0));
  const Expression num = e.child(0);
  ASSERT_EQ(num.kind(), NodeKind::Sub);
  EXPECT_TRUE(num.child(0).is_constant(1.0));
  ASSERT_EQ(num.child(1).kind(), NodeKind::Pow);
  EXPECT_EQ(num.child(1).exponent(), 2);
  EXPECT_EQ(num.child(1).child(0).kind(), NodeKind::Variable);
}

TEST(Parse, ExpPlusI) {
  const Expression e = parse("exp(2*z) + i");
  ASSERT_EQ(e.kind(), NodeKind::Add);
  ASSERT_EQ(e.child(0).kind(), NodeKind::Exp);
  const Expression arg = e.child(0).child(0);
  ASSERT_EQ(arg.kind(), NodeKind::Mul);
  EXPECT_TRUE(arg.child(0).is_constant(2.0));
  EXPECT_EQ(arg.child(1).kind(), NodeKind::Variable);
  EXPECT_TRUE(e.child(1).is_constant(C(0, 1)));
}

TEST(Parse, IncompleteInputOffset) {
  try {
    parse("z +");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("foo(z)"), ParseError);
  EXPECT_THROW(parse("w"), ParseError);
  EXPECT_THROW(parse("z^0.5"), ParseError);
  EXPECT_THROW(parse("z^z"), ParseError);
  EXPECT_THROW(parse("(z"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("z )"), ParseError);
}

TEST(Parse, Precedence) {
  // ^ binds tighter than unary minus: -z^2 = -(z^2)
  const Expression e = parse("-z^2");
  ASSERT_EQ(e.kind(), NodeKind::Neg);
  EXPECT_EQ(e.child(0).kind(), NodeKind::Pow);
  // right associativity: 2^3^2 = 2^9 = 512
  EXPECT_NEAR(std::abs(*evaluate(parse("2^3^2"), 0.0) - C(512)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(*evaluate(parse("1 - 2 - 3"), 0.0) - C(-4)), 0.0, 0.0);
  EXPECT_NEAR(std::abs(*evaluate(parse("8 / 4 / 2"), 0.0) - C(1)), 0.0, 0.0);
  EXPECT_NEAR(std::abs(*evaluate(parse("2*z^-1"), C(4)) - C(0.5)), 0.0, 1e-15);
}

TEST(Parse, Literals) {
  EXPECT_NEAR(std::abs(*evaluate(parse("pi"), 0.0) - std::numbers::pi), 0.0, 0.0);
  EXPECT_NEAR(std::abs(*evaluate(parse("e"), 0.0) - std::numbers::e), 0.0, 0.0);
  EXPECT_NEAR(std::abs(*evaluate(parse("1.5e-3"), 0.0) - 1.5e-3), 0.0, 0.0);
  EXPECT_NEAR(std::abs(*evaluate(parse("2^0.5"), 0.0) - std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Evaluate, Examples) {
  const auto sq = evaluate(parse("z^2"), C(1, 1));
  ASSERT_TRUE(sq);
  EXPECT_EQ(*sq, C(0, 2));
  EXPECT_FALSE(evaluate(parse("1/z"), C(0)));
  const auto euler = evaluate(parse("exp(z)"), C(0, std::numbers::pi));
  ASSERT_TRUE(euler);
  EXPECT_LE(std::abs(*euler - C(-1)), 1e-15);
}

TEST(Evaluate, PoleOutcomes) {
  EXPECT_FALSE(evaluate(parse("log(z)"), C(0)));
  EXPECT_FALSE(evaluate(parse("z^-2"), C(0)));
  EXPECT_FALSE(evaluate(parse("1/(z - 1)"), C(1)));
  EXPECT_FALSE(evaluate(parse("exp(exp(z))"), C(10)));  // overflow is not finite
  EXPECT_TRUE(evaluate(parse("1/z"), C(1e-200)));
}

TEST(Differentiate, PowerRule) {
  const Expression d = differentiate(parse("z^3"));
  EXPECT_EQ(d, k(3.0) * Expression::pow(z(), 2));
}

TEST(Differentiate, ChainRule) {
  const Expression d = differentiate(parse("exp(2*z)"));
  EXPECT_EQ(d, Expression::apply(NodeKind::Exp, k(2.0) * z()) * k(2.0));
  const C w(0.3, -0.2);
  EXPECT_LE(std::abs(*evaluate(d, w) - 2.0 * std::exp(2.0 * w)), 1e-14);
}

TEST(Differentiate, CentralDifferenceExample) {
  const Expression e = parse("z^3 - i*z");
  const C d = *evaluate(differentiate(e), C(2, 0));
  EXPECT_LE(std::abs(d - C(12, -1)), 1e-12);
  const C fd = *oracle::central_difference(e, C(2, 0));
  EXPECT_LE(std::abs(d - fd) / std::abs(fd), 1e-8);
}

TEST(Differentiate, FunctionTable) {
  const C w(0.4, 0.7);
  struct Row {
    const char* text;
    C expected;
  };
  const Row rows[] = {
      {"log(z)", 1.0 / w},          {"sin(z)", std::cos(w)},   {"cos(z)", -std::sin(w)},
      {"sinh(z)", std::cosh(w)},    {"cosh(z)", std::sinh(w)}, {"1/z", -1.0 / (w * w)},
      {"z^-3", -3.0 / std::pow(w, 4)}, {"z*exp(z)", std::exp(w) * (1.0 + w)},
      {"-z", -1.0},
  };
  for (const auto& r : rows) {
    const auto v = evaluate(differentiate(parse(r.text)), w);
    ASSERT_TRUE(v) << r.text;
    EXPECT_LE(std::abs(*v - r.expected), 1e-13 * (1 + std::abs(r.expected))) << r.text;
  }
}

// Every g, f and g' of the catalog against the central-difference oracle.
TEST(Differentiate, CatalogAgreesWithCentralDifferences) {
  const auto pts = oracle::annulus_points(100, 0.3, 2.0);
  for (const auto& s : catalog()) {
    for (const Expression& e : {s.g(), s.f(), s.g_prime()}) {
      const Expression d = differentiate(e);
      int checked = 0;
      for (C w : pts) {
        const auto fd = oracle::central_difference(e, w);
        const auto v = evaluate(d, w);
        if (!fd || !v) continue;
        ++checked;
        EXPECT_LE(std::abs(*v - *fd), 1e-7 * (1.0 + std::abs(*fd))) << s.name() << " " << to_string(e) << " at " << w;
      }
      EXPECT_EQ(checked, 100) << s.name();
    }
  }
}

TEST(Differentiate, Linearity) {
  const Expression e1 = parse("z^3*sin(z)");
  const Expression e2 = parse("exp(-z)/(z + 3)");
  const C a(1.5, -0.5);
  const Expression lhs = differentiate(k(a) * e1 + e2);
  const Expression rhs = k(a) * differentiate(e1) + differentiate(e2);
  for (C w : oracle::annulus_points(50, 0.3, 2.0, 99)) {
    const C l = *evaluate(lhs, w);
    const C r = *evaluate(rhs, w);
    EXPECT_LE(std::abs(l - r), 1e-13 * std::max(1.0, std::abs(r))) << w;
  }
}

TEST(Print, ParsePrintParseIsIdentity) {
  const char* texts[] = {"z",
                         "(1 - z^2)/2",
                         "exp(2*z) + i",
                         "z^3 - i*z",
                         "-z^2",
                         "(-z)^2",
                         "1/z^2",
                         "z^(-2)",
                         "2^3^2",
                         "i*exp(-z)",
                         "sin(cos(z))*sinh(z)/cosh(z)",
                         "log(z) - (z - 1)",
                         "(1+2*i)*z",
                         "z - (-3)",
                         "0.1*z + 1e-20",
                         "-(z + 1)*-(z - 1)",
                         "z/(z*z)/z"};
  for (const char* t : texts) {
    const Expression a = parse(t);
    const std::string printed = to_string(a);
    const Expression b = parse(printed);
    EXPECT_EQ(a, b) << t << " printed as " << printed;
  }
  for (const auto& s : catalog()) {
    for (const Expression& e : {s.g(), s.f(), s.g_prime(), differentiate(s.g_prime())}) {
      EXPECT_EQ(parse(to_string(e)), e) << to_string(e);
    }
  }
}

TEST(Print, ConstantsKeepFullPrecision) {
  const Expression e = k(C(0.1, std::numbers::pi)) * z();
  EXPECT_EQ(parse(to_string(e)), e);
  EXPECT_EQ(*evaluate(parse(to_string(e)), 1.0), C(0.1, std::numbers::pi));
}

TEST(Builders, FoldConstants) {
  EXPECT_TRUE(parse("2*3 + 1").is_constant(7.0));
  EXPECT_EQ(parse("z*1"), z());
  EXPECT_EQ(parse("0 + z"), z());
  EXPECT_TRUE(parse("0*z").is_constant(0.0));
  EXPECT_EQ(parse("z^1"), z());
}
