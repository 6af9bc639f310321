#include <gtest/gtest.h>

#include "common.hpp"

using namespace adjflux;
using adjflux::testing::ex;
using adjflux::testing::load;

namespace {

std::vector<Expr> exs(const ModelFile& m, const std::vector<std::string>& texts) {
  std::vector<Expr> out;
  for (const auto& t : texts) out.push_back(ex(m, t));
  return out;
}

/// A single nonzero constant c with got[i] = c * want[i] for every i.
std::optional<Rational> common_factor(const std::vector<Expr>& got, const std::vector<Expr>& want) {
  if (got.size() != want.size()) return std::nullopt;
  std::optional<Rational> c;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].is_zero() && want[i].is_zero()) continue;
    auto k = equal_mod_nonzero_constant(got[i], want[i]);
    if (!k || (c && *c != *k)) return std::nullopt;
    c = k;
  }
  return c;
}

ConservedVector stripped(const ModelFile& m, const std::string& sym, const std::string& sub) {
  DiffSystem sys = m.system();
  return strip_trivial(conserved_vector(sys, m.symmetry(sym), m.substitution(sub)), Ranking(sys));
}

Generator substitute_function(const Generator& X, Atom f, const Expr& value, const JetSpace& space, int orders) {
  std::map<Atom, Expr> values;
  Expr d = value;
  Atom a = f;
  for (int k = 0; k <= orders; ++k) {
    values.emplace(a, d);
    d = total_derivative(d, "t", space);
    a = a.differentiated("t");
  }
  Generator out;
  for (const auto& [k, e] : X.xi) out.xi[k] = e.substitute(values);
  for (const auto& [k, e] : X.eta) out.eta[k] = e.substitute(values);
  return out;
}

}  // namespace

TEST(Characteristic, TimeTranslation) {
  auto m = load("kdv.model");
  EXPECT_EQ(characteristic(m.symmetry("Xt"), m.space).components[0], ex(m, "-D[u,t]"));
}

TEST(Characteristic, Scaling) {
  auto m = load("heat1d.model");
  EXPECT_EQ(characteristic(m.symmetry("Xu"), m.space).components[0], ex(m, "u"));
}

TEST(Characteristic, Xh) {
  auto m = load("kp.model");
  auto w = characteristic(m.symmetry("Xh"), m.space).components;
  EXPECT_EQ(w[0], ex(m, "-h' - h*D[u,x]"));
  EXPECT_EQ(w[1], ex(m, "-h''*y - h*D[omega,x]"));
}

TEST(ConservedVector, KpXfMatchesClosedForm) {
  auto m = load("kp.model");
  auto cv = stripped(m, "Xf", "uu");
  auto want = exs(m, {"-1/2*f'*u^2 - (x*f'' + 1/2*y^2*f''')*u",
                      "(u*D[u,x,x] + 1/3*u^3 - 1/2*D[u,x]^2 - 1/2*omega^2)*f' + (x*D[u,x,x] + 1/2*x*u^2 - D[u,x])*f''"
                      " + 1/4*(y^2*u^2 + 2*y^2*D[u,x,x] - 4*x*y*omega)*f''' - 1/6*y^3*omega*f''''",
                      "u*omega*f' + x*omega*f'' + (x*y*u + 1/2*y^2*omega)*f''' + 1/6*y^3*u*f''''"});
  auto c = common_factor(cv.components, want);
  ASSERT_TRUE(c.has_value()) << to_string(cv.components[0]) << " | " << to_string(cv.components[1]) << " | "
                             << to_string(cv.components[2]);
  EXPECT_EQ(*c, Rational(1));
}

TEST(ConservedVector, KpXgMatchesClosedForm) {
  auto m = load("kp.model");
  auto cv = stripped(m, "Xg", "uu");
  auto want = exs(m, {"y*u*g''", "(x*omega - y*D[u,x,x] - 1/2*y*u^2)*g'' + 1/2*y^2*omega*g'''",
                      "-(x*u + y*omega)*g'' - 1/2*y^2*u*g'''"});
  EXPECT_TRUE(common_factor(cv.components, want).has_value());
}

TEST(ConservedVector, KpXhMatchesClosedForm) {
  auto m = load("kp.model");
  auto cv = stripped(m, "Xh", "uu");
  auto want = exs(m, {"u*h'", "y*omega*h'' - (D[u,x,x] + 1/2*u^2)*h'", "-omega*h' - y*u*h''"});
  EXPECT_TRUE(common_factor(cv.components, want).has_value());
}

TEST(ConservedVector, KpRawVectorsVerify) {
  auto m = load("kp.model");
  DiffSystem sys = m.system();
  Ranking r(sys);
  for (const char* name : {"Xf", "Xg", "Xh"}) {
    auto cv = conserved_vector(sys, m.symmetry(name), m.substitution("uu"));
    for (const auto& c : cv.components)
      for (Atom a : c.atoms()) EXPECT_FALSE(m.space.is_v_atom(a));
    EXPECT_TRUE(verify(cv, r).passed()) << name;
  }
}

TEST(ConservedVector, HeatWithAdjointSolution) {
  for (const char* name : {"heat1d.model", "heat2d.model", "heat3d.model"}) {
    auto m = load(name);
    DiffSystem sys = m.system();
    auto cv = conserved_vector(sys, m.symmetry("Xu"), m.substitution("phi"));
    const auto& xs = m.space.independents();
    EXPECT_EQ(cv.components[0], ex(m, "phi*u")) << name;
    for (std::size_t i = 1; i < xs.size(); ++i)
      EXPECT_EQ(cv.components[i], ex(m, "u*D[phi," + xs[i] + "] - phi*D[u," + xs[i] + "]")) << name << xs[i];
    EXPECT_TRUE(verify(cv, Ranking(sys)).passed()) << name;
  }
}

TEST(ConservedVector, HeatProjectiveVector) {
  for (const char* name : {"heat1d.model", "heat2d.model", "heat3d.model"}) {
    auto m = load(name);
    DiffSystem sys = m.system();
    const auto& xs = m.space.independents();
    int n = static_cast<int>(xs.size()) - 1;
    std::string r2;
    for (std::size_t i = 1; i < xs.size(); ++i) r2 += (i > 1 ? " + " : "") + xs[i] + "^2";
    std::string weight = "((" + r2 + ") - 2*" + std::to_string(n) + "*t)/4";
    std::vector<Expr> want{ex(m, weight + "*u")};
    for (std::size_t i = 1; i < xs.size(); ++i)
      want.push_back(ex(m, xs[i] + "/2*u - " + weight + "*D[u," + xs[i] + "]"));

    auto cv = conserved_vector(sys, m.symmetry("Xu"), m.substitution("proj"));
    EXPECT_EQ(common_factor(cv.components, want), Rational(1)) << name;

    auto from_proj = stripped(m, "Xproj", "one");
    EXPECT_TRUE(common_factor(from_proj.components, want).has_value()) << name;
    EXPECT_TRUE(verify(from_proj, Ranking(sys)).passed()) << name;
  }
}

TEST(ConservedVector, KdvStrict) {
  auto m = load("kdv.model");
  DiffSystem sys = m.system();
  Ranking r(sys);
  for (const char* name : {"Xt", "Xx", "Galilei"})
    EXPECT_TRUE(verify(conserved_vector(sys, m.symmetry(name), m.substitution("strict")), r).passed()) << name;
  // The raw density -u*u_x is an x-derivative and strips away entirely.
  auto cx = strip_trivial(conserved_vector(sys, m.symmetry("Xx"), m.substitution("strict")), r);
  EXPECT_TRUE(cx.components[0].is_zero());
  auto cg = strip_trivial(conserved_vector(sys, m.symmetry("Galilei"), m.substitution("strict")), r);
  EXPECT_TRUE(equal_mod_nonzero_constant(cg.components[0], ex(m, "u")).has_value()) << to_string(cg.components[0]);
}

TEST(ConservedVector, RejectedSubstitution) {
  auto m = load("nlheat.model");
  Substitution bad("bad", {{"u", ex(m, "u")}});
  try {
    conserved_vector(m.system(), m.symmetry("Xt"), bad);
    FAIL();
  } catch (const MathError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("substitution 'bad' is rejected"), std::string::npos);
    EXPECT_NE(msg.find("residuals"), std::string::npos);
  }
  EXPECT_NO_THROW(conserved_vector(m.system(), m.symmetry("Xt"), bad, true));
}

TEST(ConservedVector, LinearInGenerator) {
  auto m = load("kp.model");
  DiffSystem sys = m.system();
  const auto& sub = m.substitution("uu");
  Rational a(3, 2), b(-2);
  auto combined = conserved_vector(sys, Generator::combine(a, m.symmetry("Xf"), b, m.symmetry("Xh")), sub);
  auto xf = conserved_vector(sys, m.symmetry("Xf"), sub);
  auto xh = conserved_vector(sys, m.symmetry("Xh"), sub);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(combined.components[i], Expr(a) * xf.components[i] + Expr(b) * xh.components[i]);
}

TEST(ConservedVector, ScalesWithSubstitution) {
  auto m = load("nlheat.model");
  DiffSystem sys = m.system();
  const auto& sub = m.substitution("inv2");
  auto base = conserved_vector(sys, m.symmetry("Xx"), sub);
  for (Rational c : {Rational(2), Rational(-1, 3), Rational(7, 5)}) {
    auto scaled = conserved_vector(sys, m.symmetry("Xx"), sub.scaled(c));
    for (std::size_t i = 0; i < base.components.size(); ++i) EXPECT_EQ(scaled.components[i], Expr(c) * base.components[i]);
  }
}

TEST(ConservedVector, XfFamilyInstances) {
  auto m = load("kp.model");
  DiffSystem sys = m.system();
  Ranking r(sys);
  Atom f = m.space.f("f");
  for (const char* value : {"1", "t", "t^2", "t^3"}) {
    Generator X = substitute_function(m.symmetry("Xf"), f, ex(m, value), m.space, 5);
    ASSERT_TRUE(check_symmetry(sys, X).ok) << value;
    auto cv = conserved_vector(sys, X, m.substitution("uu"));
    for (const auto& c : cv.components)
      for (Atom a : c.atoms()) EXPECT_FALSE(a.is_function()) << value;
    EXPECT_TRUE(verify(cv, r).passed()) << value;
  }
}

TEST(Verify, ZeroVectorPasses) {
  auto m = load("kp.model");
  auto report = verify(std::vector<Expr>(3), Ranking(m.system()));
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(report.certificate.empty());
  EXPECT_EQ(report.points, 100);
}

TEST(Verify, NonConservedVectorFails) {
  auto m = load("kp.model");
  Ranking r(m.system());
  auto report = verify(exs(m, {"u", "0", "0"}), r);
  EXPECT_FALSE(report.symbolic_ok);
  EXPECT_FALSE(report.numeric_ok);
  EXPECT_EQ(report.residual, ex(m, "u*D[u,x] + D[u,x,x,x] + D[omega,y]"));
}

TEST(Verify, KpCertificateGroups) {
  auto m = load("kp.model");
  Ranking r(m.system());
  auto report = verify(stripped(m, "Xf", "uu"), r);
  ASSERT_TRUE(report.passed());
  EXPECT_EQ(report.certificate.at(CertificateKey{false, 0, {}}), ex(m, "-(u*f' + x*f'' + 1/2*y^2*f''')"));
  EXPECT_EQ(report.certificate.at(CertificateKey{false, 1, {}}), ex(m, "-(omega*f' + x*y*f''' + 1/6*y^3*f'''')"));
}

TEST(Verify, DeterministicForSeed) {
  auto m = load("kp.model");
  Ranking r(m.system());
  auto cv = stripped(m, "Xg", "uu");
  VerifyOptions o;
  o.seed = 99;
  auto a = verify(cv, r, o);
  auto b = verify(cv, r, o);
  EXPECT_EQ(a.numeric_max, b.numeric_max);
  EXPECT_EQ(a.seed, 99u);
  EXPECT_LE(a.numeric_max, 1e-9);
}

TEST(Verify, ReportText) {
  auto m = load("kp.model");
  Ranking r(m.system());
  std::string text = to_text(verify(exs(m, {"u", "0", "0"}), r), r);
  EXPECT_EQ(text.rfind("verdict: fail\nsymbolic: fail\nresidual: ", 0), 0u);
  EXPECT_NE(text.find("certificate:\n  F1: 1\n"), std::string::npos);
  EXPECT_NE(text.find("numeric: fail max_relative="), std::string::npos);
  EXPECT_NE(text.find("seed: 20080101\n"), std::string::npos);
}

TEST(Strip, RemovesCurlRemainder) {
  auto m = load("kp.model");
  Ranking r(m.system());
  auto base = stripped(m, "Xh", "uu");
  // A = u*u_x*y: D_y(A) added to C^t and -D_t(A) to C^y is divergence free.
  Expr a = ex(m, "u*D[u,x]*y");
  ConservedVector noisy = base;
  noisy.components[0] += total_derivative(a, "y", m.space);
  noisy.components[2] -= total_derivative(a, "t", m.space);
  ASSERT_TRUE(verify(noisy, r).passed());
  auto cleaned = strip_trivial(noisy, r);
  EXPECT_TRUE(common_factor(cleaned.components, base.components).has_value())
      << to_string(cleaned.components[0]) << " | " << to_string(cleaned.components[1]) << " | "
      << to_string(cleaned.components[2]);
}

TEST(Strip, MinimalVectorUnchanged) {
  auto m = load("heat2d.model");
  DiffSystem sys = m.system();
  Ranking r(sys);
  auto cv = conserved_vector(sys, m.symmetry("Xu"), m.substitution("phi"));
  auto again = strip_trivial(cv, r);
  for (std::size_t i = 0; i < cv.components.size(); ++i) EXPECT_TRUE(again.components[i].identical(cv.components[i]));
}

TEST(Strip, ResultStillVerifies) {
  auto m = load("kp.model");
  Ranking r(m.system());
  for (const char* name : {"Xf", "Xg", "Xh"}) EXPECT_TRUE(verify(stripped(m, name, "uu"), r).passed()) << name;
}
