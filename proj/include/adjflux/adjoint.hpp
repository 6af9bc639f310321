#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adjflux/generator.hpp"
#include "adjflux/linalg.hpp"
#include "adjflux/manifold.hpp"

namespace adjflux {

/// L = sum_b v^b F_b.
inline Expr formal_lagrangian(const DiffSystem& sys) {
  Expr l;
  const auto& space = sys.space();
  for (std::size_t b = 0; b < sys.m(); ++b) l += Expr(space.v(space.dependents()[b])) * sys.equations()[b].lhs;
  return l;
}

/// Adjoint equations F*_a = dL/du^a = 0 over the (u, v) jet space. Named
/// after the originals with a trailing '*'.
struct AdjointSystem {
  JetSpace space;
  std::vector<Equation> equations;
};

inline AdjointSystem adjoint_system(const DiffSystem& sys) {
  Expr l = formal_lagrangian(sys);
  AdjointSystem out{sys.space(), {}};
  for (std::size_t a = 0; a < sys.m(); ++a) {
    out.equations.push_back(
        Equation{sys.equations()[a].name + "*", variational_derivative(l, sys.space().dependents()[a], sys.space()), {}});
  }
  return out;
}

/// Replaces every jet coordinate of a renamed variable, keeping its index.
inline Expr rename_jets(const Expr& e, const std::map<std::string, std::string>& names) {
  std::map<Atom, Expr> values;
  for (Atom a : e.atoms()) {
    if (!a.is_jet()) continue;
    auto it = names.find(a.name());
    if (it != names.end()) values.emplace(a, Expr(Atom::jet(it->second, a.index())));
  }
  return values.empty() ? e : e.substitute(values);
}

namespace detail {

inline bool is_homogeneous_linear(const Expr& f, const JetSpace& space) {
  for (Atom a : f.denominator().atoms())
    if (space.is_u_atom(a)) return false;
  for (const auto& [m, c] : f.numerator().terms()) {
    int degree = 0;
    for (const auto& [a, e] : m.factors()) {
      if (!space.is_u_atom(a)) continue;
      if (e < 0) return false;
      degree += e;
    }
    if (degree != 1) return false;
  }
  return true;
}

}  // namespace detail

/// For a homogeneous linear system, checks that v.F(u) - u.F*(v) is a total
/// divergence by applying the Euler operator for every u^a and v^a.
inline bool classical_adjoint_check(const DiffSystem& sys) {
  const auto& space = sys.space();
  for (const auto& eq : sys.equations())
    if (!detail::is_homogeneous_linear(eq.lhs, space))
      throw MathError("classical adjoint identity requires linearity");
  auto adj = adjoint_system(sys);
  Expr e = formal_lagrangian(sys);
  for (std::size_t a = 0; a < sys.m(); ++a) e -= Expr(space.u(space.dependents()[a])) * adj.equations[a].lhs;
  for (std::size_t a = 0; a < sys.m(); ++a) {
    if (!variational_derivative(e, space.dependents()[a], space).is_zero()) return false;
    if (!variational_derivative(e, space.adjoints()[a], space).is_zero()) return false;
  }
  return true;
}

/// Result of substituting v = phi(x,u) into the adjoint system and reducing
/// modulo the original equations: F*_a(phi) = sum_b lambda[a][b] F_b plus
/// the prolonged terms in `certificates`, up to `residuals`.
struct SelfAdjointnessReport {
  bool verdict = false;
  SubstitutionClass substitution_class = SubstitutionClass::general;
  std::vector<std::vector<Expr>> lambda;
  std::vector<Expr> residuals;
  std::vector<Certificate> certificates;
};

inline SelfAdjointnessReport check_substitution(const DiffSystem& sys, const Substitution& sub, const Ranking& ranking) {
  SelfAdjointnessReport report;
  report.substitution_class = sub.validate(sys.space());
  auto adj = adjoint_system(sys);
  report.verdict = true;
  for (std::size_t a = 0; a < sys.m(); ++a) {
    Reduction red = ranking.reduce(sub.apply(adj.equations[a].lhs, sys.space()));
    std::vector<Expr> row(sys.m());
    for (const auto& [k, c] : red.certificate)
      if (!k.constraint && k.prolongation.empty()) row[k.equation] = c;
    if (!red.normal_form.is_zero()) report.verdict = false;
    report.lambda.push_back(std::move(row));
    report.residuals.push_back(red.normal_form);
    report.certificates.push_back(std::move(red.certificate));
  }
  return report;
}

inline SelfAdjointnessReport check_substitution(const DiffSystem& sys, const Substitution& sub) {
  return check_substitution(sys, sub, Ranking(sys));
}

/// Built-in substitution templates.
struct AnsatzSpec {
  enum class Kind { power, affine, constant } kind = Kind::power;
  int degree = 0;
};

inline constexpr int kMaxPowerExponent = 8;
inline constexpr int kMaxAnsatzDegree = 8;

/// "power", "const" or "affine:<deg>".
inline AnsatzSpec parse_ansatz(const std::string& text) {
  if (text == "power") return {AnsatzSpec::Kind::power, 0};
  if (text == "const") return {AnsatzSpec::Kind::constant, 0};
  if (text == "affine") throw Error("unbounded ansatz space: use affine:<degree>");
  if (text.rfind("affine:", 0) == 0) {
    std::string d = text.substr(7);
    if (d.empty() || d.find_first_not_of("0123456789") != std::string::npos)
      throw Error("bad ansatz degree '" + d + "'");
    int degree = std::stoi(d);
    if (degree > kMaxAnsatzDegree)
      throw Error("unbounded ansatz space: degree above " + std::to_string(kMaxAnsatzDegree));
    return {AnsatzSpec::Kind::affine, degree};
  }
  throw Error("unknown ansatz '" + text + "' (expected power, affine:<deg> or const)");
}

namespace detail {

/// Monomials in the independents of total degree <= deg, by ascending degree.
inline std::vector<Expr> independent_monomials(const JetSpace& space, int deg) {
  std::vector<Expr> out;
  for (const auto& idx : multi_indices(space, 0, deg)) {
    Expr m(1);
    for (const auto& x : idx.vars()) m *= Expr(space.x(x));
    out.push_back(m);
  }
  return out;
}

/// Linear template: substitution = sum_j c_j basis[j].
inline std::optional<Substitution> solve_linear_ansatz(const DiffSystem& sys, const Ranking& ranking,
                                                       const std::vector<Substitution>& basis,
                                                       const std::string& name) {
  auto adj = adjoint_system(sys);
  const auto& space = sys.space();
  std::map<std::pair<std::size_t, Monomial>, std::size_t> rows;
  RationalMatrix matrix;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (std::size_t a = 0; a < sys.m(); ++a) {
      Expr r = ranking.reduce(basis[j].apply(adj.equations[a].lhs, space)).normal_form;
      if (!r.is_polynomial()) throw MathError("ansatz residual has a non-monomial denominator");
      for (const auto& [m, c] : r.numerator().terms()) {
        auto [it, inserted] = rows.emplace(std::make_pair(a, m), matrix.size());
        if (inserted) matrix.emplace_back(basis.size(), Rational(0));
        matrix[it->second][j] = c;
      }
    }
  }
  auto kernel = nullspace(std::move(matrix), basis.size());
  if (kernel.empty()) return std::nullopt;
  std::map<std::string, Expr> comps;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (kernel.front()[j] == 0) continue;
    for (const auto& [dep, e] : basis[j].components()) comps[dep] += Expr(kernel.front()[j]) * e;
  }
  return Substitution(name, comps);
}

}  // namespace detail

/// First substitution of the template family accepted by check_substitution,
/// or nothing. Power: v^a = (u^a)^k for k = 1, -1, 2, -2, ... Affine:
/// v^a = A^a(x) + B^a_b(x) u^b with polynomial coefficients. Const: v^a = c^a.
inline std::optional<Substitution> find_substitution(const DiffSystem& sys, const AnsatzSpec& ansatz) {
  Ranking ranking(sys);
  const auto& space = sys.space();
  auto accept = [&](const Substitution& s) { return check_substitution(sys, s, ranking).verdict; };

  if (ansatz.kind == AnsatzSpec::Kind::power) {
    for (int mag = 1; mag <= kMaxPowerExponent; ++mag) {
      for (int k : {mag, -mag}) {
        std::map<std::string, Expr> comps;
        for (const auto& dep : space.dependents()) comps[dep] = Expr(space.u(dep)).pow(k);
        Substitution s("power", comps);
        if (accept(s)) return s;
      }
    }
    return std::nullopt;
  }

  int degree = ansatz.kind == AnsatzSpec::Kind::affine ? ansatz.degree : 0;
  if (degree < 0 || degree > kMaxAnsatzDegree) throw Error("unbounded ansatz space");
  auto monomials = detail::independent_monomials(space, degree);
  std::vector<Substitution> basis;
  for (const auto& dep : space.dependents()) {
    for (const auto& m : monomials) basis.emplace_back("", std::map<std::string, Expr>{{dep, m}});
    if (ansatz.kind != AnsatzSpec::Kind::affine) continue;
    for (const auto& src : space.dependents())
      for (const auto& m : monomials) basis.emplace_back("", std::map<std::string, Expr>{{dep, m * Expr(space.u(src))}});
  }
  auto found = detail::solve_linear_ansatz(sys, ranking, basis,
                                           ansatz.kind == AnsatzSpec::Kind::affine ? "affine" : "const");
  if (!found || !accept(*found)) return std::nullopt;
  return found;
}

/// mu F = 0 with mu = phi/u (scalar equations).
struct MultiplierForm {
  DiffSystem system;
  Expr multiplier;
  SelfAdjointnessReport strict_check;
};

inline MultiplierForm multiplier_form(const DiffSystem& sys, const Substitution& sub) {
  if (sys.m() != 1) throw MathError("multiplier form defined for scalar equations only");
  sub.validate(sys.space());
  const auto& dep = sys.space().dependents()[0];
  Expr mu = sub.component(dep) / Expr(sys.space().u(dep));
  if (mu.is_zero()) throw MathError("multiplier vanishes");
  const auto& eq = sys.equations()[0];
  DiffSystem rewritten = sys.with_equations({Equation{eq.name, mu * eq.lhs, eq.lead}});
  Substitution strict("strict", {{dep, Expr(sys.space().u(dep))}});
  return MultiplierForm{rewritten, mu, check_substitution(rewritten, strict)};
}

}  // namespace adjflux
