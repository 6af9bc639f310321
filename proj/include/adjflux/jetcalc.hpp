#pragma once

#include <map>
#include <string>
#include <vector>

#include "adjflux/expr.hpp"
#include "adjflux/jet_space.hpp"

namespace adjflux {

namespace detail {

/// D_i applied to one atom: 1, 0 or another atom.
struct AtomDerivative {
  enum class Kind { zero, one, atom } kind = Kind::zero;
  std::optional<Atom> atom;
};

inline AtomDerivative differentiate_atom(Atom a, const std::string& var, const JetSpace& space) {
  switch (a.kind()) {
    case AtomKind::independent:
      return {a.name() == var ? AtomDerivative::Kind::one : AtomDerivative::Kind::zero, std::nullopt};
    case AtomKind::jet: {
      if (a.order() + 1 > space.max_order())
        throw MathError("jet order " + std::to_string(a.order() + 1) + " exceeds the cap of " +
                        std::to_string(space.max_order()));
      return {AtomDerivative::Kind::atom, a.differentiated(var)};
    }
    case AtomKind::function:
      if (!a.depends_on_arg(var)) return {};
      return {AtomDerivative::Kind::atom, a.differentiated(var)};
  }
  return {};
}

/// Derivation on polynomials induced by a per-atom rule.
template <class AtomRule>
Poly derive_poly(const Poly& p, AtomRule&& rule) {
  std::vector<Poly::Term> out;
  for (const auto& [m, c] : p.terms()) {
    for (const auto& [a, e] : m.factors()) {
      AtomDerivative d = rule(a);
      if (d.kind == AtomDerivative::Kind::zero) continue;
      Monomial reduced = m.times(a, -1);
      if (d.kind == AtomDerivative::Kind::atom) reduced = reduced.times(*d.atom, 1);
      out.emplace_back(std::move(reduced), c * e);
    }
  }
  return Poly::from_terms(std::move(out));
}

template <class AtomRule>
Expr derive(const Expr& e, AtomRule&& rule) {
  if (e.is_polynomial()) return Expr(derive_poly(e.numerator(), rule));
  const Poly& n = e.numerator();
  const Poly& d = e.denominator();
  return Expr::ratio(derive_poly(n, rule) * d - n * derive_poly(d, rule), d * d);
}

}  // namespace detail

/// Total derivative D_var through every jet coordinate and arbitrary
/// function. Throws when `var` is not an independent variable or the result
/// would exceed the jet-order cap.
inline Expr total_derivative(const Expr& e, const std::string& var, const JetSpace& space) {
  space.independent_position(var);
  return detail::derive(e, [&](Atom a) { return detail::differentiate_atom(a, var, space); });
}

/// D_J = D_{j1} ... D_{js}.
inline Expr total_derivative(const Expr& e, const MultiIndex& idx, const JetSpace& space) {
  Expr r = e;
  for (const auto& var : idx.vars()) {
    if (r.is_zero()) break;
    r = total_derivative(r, var, space);
  }
  return r;
}

/// Explicit partial derivative in an independent variable: differentiates the
/// variable itself and arbitrary functions of it, but not jet coordinates.
inline Expr explicit_partial(const Expr& e, const std::string& var, const JetSpace& space) {
  space.independent_position(var);
  return detail::derive(e, [&](Atom a) {
    if (a.is_jet()) return detail::AtomDerivative{};
    return detail::differentiate_atom(a, var, space);
  });
}

/// Highest derivative order of `dependent` occurring in e (-1 if absent).
inline int max_order_of(const Expr& e, const std::string& dependent) {
  int best = -1;
  for (Atom a : e.atoms())
    if (a.is_jet() && a.name() == dependent) best = std::max(best, a.order());
  return best;
}

/// Euler operator delta L / delta w for a dependent or adjoint variable w:
/// sum over sorted multi-indices J of (-D)_J dL/dw_J.
inline Expr variational_derivative(const Expr& lagrangian, const std::string& target, const JetSpace& space) {
  if (!space.is_dependent(target) && !space.is_adjoint(target))
    throw Error("'" + target + "' is not a dependent variable");
  Expr result;
  for (Atom a : lagrangian.atoms()) {
    if (!a.is_jet() || a.name() != target) continue;
    Expr term = total_derivative(lagrangian.partial(a), a.index(), space);
    if (a.order() % 2 == 1) term = -term;
    result += term;
  }
  return result;
}

}  // namespace adjflux
