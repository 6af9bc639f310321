#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adjflux/adjoint.hpp"
#include "adjflux/generator.hpp"
#include "adjflux/manifold.hpp"

namespace adjflux {

/// W^a = eta^a - xi^j u^a_j.
struct Characteristic {
  std::vector<Expr> components;
};

inline Characteristic characteristic(const Generator& X, const JetSpace& space) {
  X.validate(space);
  return {characteristic_components(X, space)};
}

struct ConservedVector {
  std::vector<Expr> components;  // C^i, one per independent
  std::string generator;
  std::string substitution;
};

/// Conserved vector of the formal Lagrangian before eliminating v:
///   C^i = xi^i L + sum_a sum_{J,K} D_J(W^a) (-D)_K(dL/du^a_{iJK}) * w(i,J,K)
/// with w = perm(J) perm(K) / perm(iJK) over sorted multi-indices, which
/// attributes each mixed-derivative coefficient to its sorted representative.
inline std::vector<Expr> conserved_vector_lagrangian(const DiffSystem& sys, const Generator& X) {
  const auto& space = sys.space();
  Expr l = formal_lagrangian(sys);
  auto w = characteristic(X, space).components;
  std::vector<Expr> out;
  for (const auto& xi_name : space.independents()) {
    Expr c = X.xi_of(xi_name) * l;
    for (Atom a : l.atoms()) {
      if (!space.is_u_atom(a) || a.index().count(xi_name) == 0) continue;
      const auto& wa = w[space.dependent_position(a.name())];
      if (wa.is_zero()) continue;
      Expr dl = l.partial(a);
      MultiIndex rest = a.index().minus(xi_name);
      Rational total(a.index().permutations());
      for (const auto& j : rest.submultisets()) {
        MultiIndex k = rest.minus(j);
        Rational weight = Rational(j.permutations() * k.permutations()) / total;
        Expr term = total_derivative(wa, j, space) * total_derivative(dl, k, space);
        if (k.order() % 2 == 1) weight = -weight;
        c += Expr(weight) * term;
      }
    }
    out.push_back(c);
  }
  return out;
}

/// Conserved vector components with v := phi(x,u) substituted. Unless `unchecked`, the
/// substitution must pass check_substitution.
inline ConservedVector conserved_vector(const DiffSystem& sys, const Generator& X, const Substitution& sub,
                                        bool unchecked = false) {
  const auto& space = sys.space();
  if (!unchecked) {
    auto report = check_substitution(sys, sub);
    if (!report.verdict) {
      std::string msg = "substitution '" + sub.name() + "' is rejected; residuals:";
      for (const auto& r : report.residuals) msg += " [" + to_string(r) + "]";
      throw MathError(msg);
    }
  } else {
    sub.validate(space);
  }
  ConservedVector cv;
  cv.substitution = sub.name();
  for (const auto& c : conserved_vector_lagrangian(sys, X)) cv.components.push_back(sub.apply(c, space));
  return cv;
}

/// sum_i D_i(C^i).
inline Expr divergence(const std::vector<Expr>& components, const JetSpace& space) {
  Expr d;
  for (std::size_t i = 0; i < components.size(); ++i) d += total_derivative(components[i], space.independents()[i], space);
  return d;
}

inline constexpr std::uint64_t kDefaultSeed = 20080101;
inline constexpr double kDefaultTolerance = 1e-9;

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  double tolerance = kDefaultTolerance;
  int points = 100;
  std::optional<FuncRealization> realization;
};

struct VerificationReport {
  bool symbolic_ok = false;
  bool numeric_ok = false;
  Expr residual;  // normal form of the divergence
  Certificate certificate;
  double numeric_max = 0;
  int points = 0;
  std::uint64_t seed = 0;

  bool passed() const { return symbolic_ok && numeric_ok; }
};

namespace detail {

/// Function families realized as polynomials: single-argument functions that
/// no constraint solves for.
inline std::vector<std::string> realizable_functions(const Ranking& ranking) {
  std::vector<std::string> names;
  for (const auto& f : ranking.space().functions()) {
    if (f.args.size() != 1) continue;
    bool constrained = false;
    for (const auto& r : ranking.rules())
      if (r.constraint && r.lead.name() == f.name) constrained = true;
    if (!constrained) names.push_back(f.name);
  }
  return names;
}

}  // namespace detail

/// Largest relative divergence |sum_i D_i C^i| / max(1, sum_i |D_i C^i|) over
/// sampled points of the solution manifold.
inline double numeric_divergence(const std::vector<Expr>& components, const Ranking& ranking,
                                 const VerifyOptions& options, int* used_points = nullptr) {
  const auto& space = ranking.space();
  std::vector<Expr> parts;
  std::set<Atom> atoms;
  for (std::size_t i = 0; i < components.size(); ++i) {
    parts.push_back(total_derivative(components[i], space.independents()[i], space));
    auto a = parts.back().atoms();
    atoms.insert(a.begin(), a.end());
  }
  ManifoldSampler sampler(ranking, options.seed);
  sampler.set_realization(options.realization ? *options.realization
                                              : FuncRealization::random(detail::realizable_functions(ranking),
                                                                        sampler.rng()));
  double worst = 0;
  int used = 0;
  for (int attempt = 0; used < options.points && attempt < options.points * 10; ++attempt) {
    double sum = 0;
    double scale = 0;
    try {
      Point p = sampler.sample(atoms);
      for (const auto& part : parts) {
        double v = eval_numeric(part, p, sampler.realization());
        sum += v;
        scale += std::abs(v);
      }
    } catch (const EvalError&) {
      continue;
    }
    worst = std::max(worst, std::abs(sum) / std::max(1.0, scale));
    ++used;
  }
  if (used_points) *used_points = used;
  return worst;
}

inline VerificationReport verify(const std::vector<Expr>& components, const Ranking& ranking,
                                 const VerifyOptions& options = {}) {
  VerificationReport report;
  Reduction red = ranking.reduce(divergence(components, ranking.space()));
  report.residual = red.normal_form;
  report.certificate = std::move(red.certificate);
  report.symbolic_ok = report.residual.is_zero();
  report.seed = options.seed;
  report.numeric_max = numeric_divergence(components, ranking, options, &report.points);
  report.numeric_ok = report.points > 0 && report.numeric_max <= options.tolerance;
  return report;
}

inline VerificationReport verify(const ConservedVector& cv, const Ranking& ranking, const VerifyOptions& options = {}) {
  return verify(cv.components, ranking, options);
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

/// Structured plain-text form of a report.
inline std::string to_text(const VerificationReport& r, const Ranking& ranking) {
  std::ostringstream os;
  os << "verdict: " << (r.passed() ? "pass" : "fail") << "\n";
  os << "symbolic: " << (r.symbolic_ok ? "pass" : "fail") << "\n";
  if (!r.symbolic_ok) os << "residual: " << to_string(r.residual) << "\n";
  os << "certificate:\n";
  if (r.certificate.empty()) os << "  (none)\n";
  for (const auto& [k, c] : r.certificate) os << "  " << certificate_label(k, ranking) << ": " << to_string(c) << "\n";
  os << "numeric: " << (r.numeric_ok ? "pass" : "fail") << " max_relative=" << format_double(r.numeric_max)
     << " points=" << r.points << "\n";
  os << "seed: " << r.seed << "\n";
  return os.str();
}

namespace detail {

/// Ranking of dependent-variable jet atoms used for integration by parts.
inline bool jet_rank_less(Atom a, Atom b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a < b;
}

/// Splits p = R + D_j(A), moving exact D_j-derivatives of the top jet
/// coordinate of each term into A.
inline std::pair<Expr, Expr> integrate_by_parts(const Expr& p, const std::string& j, const JetSpace& space) {
  Expr a_acc;
  Expr r = p;
  for (int guard = 0; guard < 1000; ++guard) {
    bool progressed = false;
    for (const auto& [m, coeff] : r.numerator().terms()) {
      std::optional<Atom> top;
      for (const auto& [atom, e] : m.factors())
        if (space.is_u_atom(atom) && (!top || jet_rank_less(*top, atom))) top = atom;
      if (!top || top->index().count(j) == 0 || m.exponent(*top) != 1) continue;
      Atom b = top->with_index(top->index().minus(j));
      Monomial c = m.times(*top, -1);
      bool ok = true;
      for (const auto& [s, e] : c.factors()) {
        if (!space.is_u_atom(s) || s == b) continue;
        if (!jet_rank_less(s.differentiated(j), *top)) ok = false;
      }
      int k = c.exponent(b);
      if (!ok || k == -1) continue;
      Expr g = Expr(Poly::term(c.times(b, 1), coeff / Rational(k + 1)));
      a_acc += g;
      r -= total_derivative(g, j, space);
      progressed = true;
      break;
    }
    if (!progressed) break;
  }
  return {a_acc, r};
}

}  // namespace detail

/// Removes trivially conserved parts: for each component C^i, exact
/// D_j-derivatives (j after i) are moved to C^j as D_i terms, and C^i is
/// reduced modulo the solution manifold, until nothing changes.
inline ConservedVector strip_trivial(const ConservedVector& cv, const Ranking& ranking) {
  const auto& space = ranking.space();
  ConservedVector out = cv;
  auto& c = out.components;
  const auto& xs = space.independents();
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (int round = 0; round < 8; ++round) {
      if (!c[i].is_polynomial()) break;
      Expr before = c[i];
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        auto [a, r] = detail::integrate_by_parts(c[i], xs[j], space);
        if (a.is_zero()) continue;
        c[i] = r;
        c[j] += total_derivative(a, xs[i], space);
      }
      c[i] = ranking.reduce(c[i]).normal_form;
      if (c[i].identical(before)) break;
    }
  }
  return out;
}

}  // namespace adjflux
