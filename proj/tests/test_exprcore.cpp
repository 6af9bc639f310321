#include <gtest/gtest.h>

#include "common.hpp"

using namespace adjflux;
using adjflux::testing::load;

namespace {

JetSpace heat_space() { return JetSpace({"t", "x"}, {"u"}, {}, {{"f", {"t"}}}); }

}  // namespace

TEST(Normalize, IdentityElements) {
  auto s = heat_space();
  Atom u = s.u("u");
  Tree t = Tree::sum({Tree::product({Tree::symbol(u), Tree::constant(1)}), Tree::constant(0)});
  EXPECT_EQ(normalize(t), Expr(u));
  EXPECT_TRUE(normalize(t).is_atom());
}

TEST(Normalize, CommutativeCancellation) {
  auto s = heat_space();
  Atom u = s.u("u");
  Atom ux = s.u("u", {"x"});
  Tree a = Tree::sum({Tree::symbol(u), Tree::symbol(ux)});
  Tree b = Tree::sum({Tree::symbol(ux), Tree::symbol(u)});
  Tree diff = Tree::sum({a, Tree::product({Tree::constant(-1), b})});
  EXPECT_TRUE(normalize(diff).is_zero());
}

TEST(Normalize, HandArithmetic) {
  Atom x = Atom::independent("x");
  Tree t = Tree::sum({Tree::product({Tree::constant(2), Tree::power(Tree::symbol(x), 2), Tree::symbol(x)}),
                      Tree::product({Tree::constant(-1), Tree::power(Tree::symbol(x), 3)})});
  EXPECT_TRUE(normalize(t).identical(Expr(x).pow(3)));
}

TEST(Normalize, Idempotent) {
  auto s = heat_space();
  Expr u = s.u("u"), x = s.x("x");
  for (const Expr& e : {u * u + x / 3, (u + 1) / (u - x), Expr(u).pow(-2) * x, Expr(0)}) {
    EXPECT_TRUE(normalize(to_tree(e)).identical(e));
    EXPECT_TRUE(normalize(normalize(to_tree(e))).identical(normalize(to_tree(e))));
  }
}

TEST(Normalize, CanonicalTreeHasNoTrivialPowers) {
  Atom x = Atom::independent("x");
  Tree t = to_tree(normalize(Tree::product({Tree::power(Tree::symbol(x), 1), Tree::power(Tree::symbol(x), 0)})));
  EXPECT_EQ(t.kind(), Tree::Kind::symbol);
}

TEST(Normalize, ZeroDenominator) {
  Atom u = Atom::jet("u", {});
  Tree t = Tree::quotient(Tree::symbol(u), Tree::sum({Tree::symbol(u), Tree::product({Tree::constant(-1), Tree::symbol(u)})}));
  try {
    normalize(t);
    FAIL();
  } catch (const MathError& e) {
    EXPECT_STREQ(e.what(), "zero denominator");
  }
  EXPECT_THROW(Expr(1) / Expr(0), MathError);
}

TEST(Normalize, MonomialDenominatorsFoldIntoCoefficients) {
  Expr x = Atom::independent("x");
  Expr u = Atom::jet("u", {});
  Expr e = (x * x + u) / (2 * u);
  EXPECT_TRUE(e.is_polynomial());
  EXPECT_EQ(to_string(e), "1/2 + 1/2*x^2/u");
}

TEST(Normalize, ExactQuotientCancels) {
  Expr x = Atom::independent("x");
  Expr y = Atom::independent("y");
  EXPECT_TRUE(((x * x - y * y) / (x - y)).identical(x + y));
  Expr q = (x + 1) / (y + 1);
  EXPECT_FALSE(q.is_polynomial());
  EXPECT_TRUE((q * (y + 1)).identical(x + 1));
}

TEST(Rationals, ExactDecimalsAndFractions) {
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Rationals, UnreducedInputsAreCanonicalized) {
  Expr x = Atom::independent("x");
  Expr a = Expr(Rational(3, 3)) * x + Expr(Rational(96, 3)) * x * x;
  EXPECT_TRUE(a.identical(x + 32 * x * x));
  EXPECT_EQ(a - x, 32 * x * x);
}

TEST(EqualModConstant, Negation) {
  auto m = load("kdv.model");
  auto s = m.space;
  Expr a = parse_expr("-D[v,t] + D[v,x,x,x] + u*D[v,x]", s);
  Expr b = parse_expr("D[v,t] - D[v,x,x,x] - u*D[v,x]", s);
  EXPECT_EQ(equal_mod_nonzero_constant(a, b), Rational(-1));
}

TEST(EqualModConstant, NotProportional) {
  Expr u = Atom::jet("u", {});
  EXPECT_FALSE(equal_mod_nonzero_constant(2 * u, u * u).has_value());
}

TEST(EqualModConstant, CoefficientRatio) {
  Expr u = Atom::jet("u", {});
  Expr x = Atom::independent("x");
  EXPECT_EQ(equal_mod_nonzero_constant(6 * x.pow(3) * u, 2 * x.pow(3) * u), Rational(3));
  EXPECT_FALSE(equal_mod_nonzero_constant(u, Expr(0)).has_value());
}

TEST(EvalNumeric, Product) {
  auto s = heat_space();
  Atom u = s.u("u"), ux = s.u("u", {"x"});
  EXPECT_DOUBLE_EQ(eval_numeric(Expr(u) * Expr(ux), {{u, 2.0}, {ux, 3.0}}), 6.0);
}

TEST(EvalNumeric, KompaneetsBracket) {
  auto s = heat_space();
  Atom u = s.u("u"), ux = s.u("u", {"x"}), x = s.x("x");
  Expr e = Expr(x).pow(4) * (Expr(ux) + u + Expr(u) * u);
  EXPECT_DOUBLE_EQ(eval_numeric(e, {{x, 1.0}, {u, 1.0}, {ux, 0.0}}), 2.0);
}

TEST(EvalNumeric, FunctionRealization) {
  auto s = heat_space();
  FuncRealization funcs;
  funcs.set("f", {0.0, 0.0, 1.0});
  Expr e = Expr(s.f("f", {"t"})) * Expr(s.x("x"));
  EXPECT_DOUBLE_EQ(eval_numeric(e, {{s.x("t"), 1.0}, {s.x("x"), 5.0}}, funcs), 10.0);
}

TEST(EvalNumeric, MissingSymbolsAreListed) {
  auto s = heat_space();
  Expr e = Expr(s.u("u")) * Expr(s.x("x"));
  try {
    eval_numeric(e, {{s.u("u"), 1.0}});
    FAIL();
  } catch (const EvalError& err) {
    EXPECT_NE(std::string(err.what()).find("x"), std::string::npos);
  }
}

TEST(EvalNumeric, Singularity) {
  Expr u = Atom::jet("u", {});
  Expr x = Atom::independent("x");
  try {
    eval_numeric(Expr(1) / (u + x), {{u.as_atom(), 1.0}, {x.as_atom(), -1.0}});
    FAIL();
  } catch (const EvalError& err) {
    EXPECT_STREQ(err.what(), "numeric singularity");
  }
}

TEST(FuncSymbol, DifferentiationIncrementsOrder) {
  auto s = heat_space();
  Expr f = s.f("f");
  EXPECT_EQ(total_derivative(f, "t", s), Expr(s.f("f", {"t"})));
  EXPECT_TRUE(total_derivative(f, "x", s).is_zero());
  EXPECT_EQ(s.f("f", MultiIndex{"t", "t"}), s.f("f", MultiIndex{"t", "t"}));
  EXPECT_EQ(to_string(s.f("f", MultiIndex{"t", "t", "t"})), "f'''");
}

TEST(MultiIndex, SortedStorage) {
  EXPECT_EQ(MultiIndex({"y", "x"}), MultiIndex({"x", "y"}));
  EXPECT_EQ(Atom::jet("u", {"y", "x"}), Atom::jet("u", {"x", "y"}));
  EXPECT_EQ(MultiIndex({"x", "x", "y"}).permutations(), 3u);
}

TEST(Printer, RoundTripsThroughParser) {
  auto m = load("kp.model");
  for (const char* text : {"-1/2*f'*u^2 - (x*f'' + 1/2*y^2*f''')*u", "u^-2*D[u,x]/(1 + u)", "(x + y)/(x - y)",
                           "3/4*D[omega,y]^3 - 2", "0", "f''''*y^3/6"}) {
    Expr e = parse_expr(text, m.space);
    EXPECT_TRUE(parse_expr(to_string(e), m.space).identical(e)) << text;
  }
}
