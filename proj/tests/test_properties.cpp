#include <gtest/gtest.h>

#include <random>

#include "common.hpp"

using namespace adjflux;
using adjflux::testing::ex;
using adjflux::testing::jet_pool;
using adjflux::testing::load;
using adjflux::testing::TreeGen;

namespace {

constexpr int kCases = 500;
constexpr std::uint64_t kBaseSeed = 20080101;

JetSpace space2() { return JetSpace({"t", "x"}, {"u"}); }

/// Random nonzero rational function over the pool.
Expr random_quotient(TreeGen& gen) {
  Expr den = gen.small_poly(3);
  while (den.is_zero()) den = gen.small_poly(3);
  return gen.small_poly(3) / den;
}

/// Random linear operator sum_J c_J u_J in (t, x) with |J| <= 3.
Expr random_linear_operator(const JetSpace& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Expr e;
  for (const auto& idx : multi_indices(s, 0, 3))
    if (std::bernoulli_distribution(0.4)(rng)) e += Expr(coef(rng)) * Expr(s.u("u", idx));
  if (e.is_zero()) e = s.u("u", {"t"});
  return e;
}

}  // namespace

TEST(Properties, NormalizationIsConfluent) {
  auto s = space2();
  for (int i = 0; i < kCases; ++i) {
    TreeGen gen(jet_pool(s, 2), kBaseSeed + i);
    Tree t = gen.polynomial(4);
    Tree u = gen.shuffle(t);
    EXPECT_TRUE(normalize(t).identical(normalize(u))) << "seed " << kBaseSeed + i;
    EXPECT_TRUE(normalize(to_tree(normalize(t))).identical(normalize(t))) << "seed " << kBaseSeed + i;
  }
}

TEST(Properties, RingLaws) {
  auto s = space2();
  for (int i = 0; i < kCases; ++i) {
    TreeGen gen(jet_pool(s, 2), kBaseSeed + i);
    Expr a = gen.small_poly(3), b = gen.small_poly(3), c = random_quotient(gen);
    EXPECT_EQ(a * (b + c), a * b + a * c) << "seed " << kBaseSeed + i;
    EXPECT_EQ((a * b) * c, a * (b * c)) << "seed " << kBaseSeed + i;
    EXPECT_EQ(a + b, b + a);
    EXPECT_TRUE((a * b).identical(b * a));
    EXPECT_TRUE((a - a).is_zero());
    if (!a.is_zero()) EXPECT_EQ((c / a) * a, c) << "seed " << kBaseSeed + i;
  }
}

TEST(Properties, EvaluationIsAHomomorphism) {
  auto s = space2();
  auto pool = jet_pool(s, 2);
  for (int i = 0; i < kCases; ++i) {
    TreeGen gen(pool, kBaseSeed + i);
    std::uniform_real_distribution<double> val(0.5, 2.0);
    Point p;
    for (Atom a : pool) p[a] = val(gen.rng());
    Expr a = gen.small_poly(3), b = gen.small_poly(3);
    double ea = eval_numeric(a, p), eb = eval_numeric(b, p);
    double scale = 1 + std::abs(ea) + std::abs(eb) + std::abs(ea * eb);
    EXPECT_NEAR(eval_numeric(a + b, p), ea + eb, 1e-12 * scale) << "seed " << kBaseSeed + i;
    EXPECT_NEAR(eval_numeric(a * b, p), ea * eb, 1e-12 * scale) << "seed " << kBaseSeed + i;
  }
}

TEST(Properties, TotalDerivativesCommute) {
  auto m = load("kp.model");
  for (int i = 0; i < kCases; ++i) {
    TreeGen gen(jet_pool(m.space, 2), kBaseSeed + i);
    Expr e = gen.small_poly(3) + Expr(m.space.f("f")) * gen.small_poly(2);
    const auto& xs = m.space.independents();
    const auto& a = xs[i % 3];
    const auto& b = xs[(i + 1) % 3];
    EXPECT_TRUE(total_derivative(total_derivative(e, a, m.space), b, m.space)
                    .identical(total_derivative(total_derivative(e, b, m.space), a, m.space)))
        << "seed " << kBaseSeed + i;
  }
}

TEST(Properties, LeibnizRule) {
  auto s = space2();
  for (int i = 0; i < kCases; ++i) {
    TreeGen gen(jet_pool(s, 2), kBaseSeed + i);
    Expr a = gen.small_poly(3), b = (i % 5 == 0) ? random_quotient(gen) : gen.small_poly(3);
    std::string x = i % 2 ? "x" : "t";
    EXPECT_EQ(total_derivative(a * b, x, s), total_derivative(a, x, s) * b + a * total_derivative(b, x, s))
        << "seed " << kBaseSeed + i;
  }
}

TEST(Properties, EulerOperatorAnnihilatesDivergences) {
  auto s = space2();
  for (int i = 0; i < kCases; ++i) {
    TreeGen gen(jet_pool(s, 2), kBaseSeed + i);
    Expr p = gen.small_poly(3), q = gen.small_poly(3);
    Expr div = total_derivative(p, "t", s) + total_derivative(q, "x", s);
    EXPECT_TRUE(variational_derivative(div, "u", s).is_zero()) << "seed " << kBaseSeed + i;
  }
}

TEST(Properties, ClassicalAdjointIdentity) {
  auto s = space2();
  for (int i = 0; i < kCases; ++i) {
    std::mt19937_64 rng(kBaseSeed + i);
    Expr op = random_linear_operator(s, rng);
    DiffSystem sys(s, {Equation{"L", op, std::nullopt}});
    EXPECT_TRUE(classical_adjoint_check(sys)) << "seed " << kBaseSeed + i << ": " << to_string(op);
  }
}

TEST(Properties, DoubleAdjointIsInvolution) {
  auto s = space2();
  for (int i = 0; i < kCases; ++i) {
    std::mt19937_64 rng(kBaseSeed + i);
    Expr op = random_linear_operator(s, rng);
    DiffSystem sys(s, {Equation{"L", op, std::nullopt}});
    Expr once = rename_jets(adjoint_system(sys).equations[0].lhs, {{"v", "u"}});
    DiffSystem adj(s, {Equation{"L*", once, std::nullopt}});
    Expr twice = rename_jets(adjoint_system(adj).equations[0].lhs, {{"v", "u"}});
    EXPECT_TRUE(twice.identical(op)) << "seed " << kBaseSeed + i << ": " << to_string(op);
  }
}

TEST(Properties, ConservedVectorIsLinearInGenerator) {
  auto m = load("kdv.model");
  DiffSystem sys = m.system();
  const auto& sub = m.substitution("strict");
  auto random_generator = [&](TreeGen& gen) {
    Generator X;
    for (const auto& x : m.space.independents()) X.xi[x] = gen.small_poly(2);
    X.eta["u"] = gen.small_poly(2);
    return X;
  };
  std::vector<Atom> pool{m.space.x("t"), m.space.x("x"), m.space.u("u")};
  for (int i = 0; i < kCases; ++i) {
    TreeGen gen(pool, kBaseSeed + i);
    Generator X = random_generator(gen), Y = random_generator(gen);
    Rational a(static_cast<long>(i % 7) - 3, 2), b(static_cast<long>(i % 5) + 1, 3);
    auto cz = conserved_vector(sys, Generator::combine(a, X, b, Y), sub, true);
    auto cx = conserved_vector(sys, X, sub, true);
    auto cy = conserved_vector(sys, Y, sub, true);
    for (std::size_t k = 0; k < cz.components.size(); ++k)
      EXPECT_TRUE(cz.components[k].identical(Expr(a) * cx.components[k] + Expr(b) * cy.components[k]))
          << "seed " << kBaseSeed + i;
  }
}
