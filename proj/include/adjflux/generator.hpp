#pragma once

#include <map>
#include <string>
#include <vector>

#include "adjflux/jetcalc.hpp"

namespace adjflux {

/// Infinitesimal generator X = xi^i d/dx^i + eta^a d/du^a, optionally acting
/// on adjoint variables too. Missing entries are zero. Coefficients may
/// depend on jet coordinates (Lie-Backlund generators).
struct Generator {
  std::map<std::string, Expr> xi;
  std::map<std::string, Expr> eta;
  std::map<std::string, Expr> eta_adjoint;

  Expr xi_of(const std::string& x) const {
    auto it = xi.find(x);
    return it == xi.end() ? Expr() : it->second;
  }
  Expr eta_of(const std::string& u) const {
    auto it = eta.find(u);
    return it == eta.end() ? Expr() : it->second;
  }

  /// a*X + b*Y, entrywise.
  static Generator combine(const Rational& a, const Generator& x, const Rational& b, const Generator& y) {
    Generator r;
    auto mix = [&](const std::map<std::string, Expr>& p, const std::map<std::string, Expr>& q,
                   std::map<std::string, Expr>& out) {
      for (const auto& [k, e] : p) out[k] += Expr(a) * e;
      for (const auto& [k, e] : q) out[k] += Expr(b) * e;
    };
    mix(x.xi, y.xi, r.xi);
    mix(x.eta, y.eta, r.eta);
    mix(x.eta_adjoint, y.eta_adjoint, r.eta_adjoint);
    return r;
  }

  /// Throws if a coefficient names an unknown variable or an adjoint coordinate.
  void validate(const JetSpace& space) const {
    for (const auto& [x, e] : xi) {
      space.independent_position(x);
      check_atoms(e, space);
    }
    for (const auto& [u, e] : eta) {
      space.dependent_position(u);
      check_atoms(e, space);
    }
    for (const auto& [u, e] : eta_adjoint) {
      space.dependent_position(u);
      check_atoms(e, space);
    }
  }

 private:
  static void check_atoms(const Expr& e, const JetSpace& space) {
    for (Atom a : e.atoms()) {
      if (a.is_jet() && !space.is_dependent(a.name()))
        throw Error("generator coefficient uses '" + a.name() + "', which is not a dependent variable");
    }
  }
};

/// W^a = eta^a - xi^j u^a_j for every dependent, in declaration order.
inline std::vector<Expr> characteristic_components(const Generator& X, const JetSpace& space) {
  std::vector<Expr> w;
  for (const auto& u : space.dependents()) {
    Expr wa = X.eta_of(u);
    for (const auto& x : space.independents()) {
      Expr xi = X.xi_of(x);
      if (!xi.is_zero()) wa -= xi * Expr(space.u(u, {x}));
    }
    w.push_back(wa);
  }
  return w;
}

/// All multi-indices over the independents with order in [lo, hi].
inline std::vector<MultiIndex> multi_indices(const JetSpace& space, int lo, int hi) {
  std::vector<MultiIndex> out;
  std::vector<MultiIndex> layer{MultiIndex{}};
  for (int order = 0; order <= hi; ++order) {
    if (order >= lo) out.insert(out.end(), layer.begin(), layer.end());
    std::vector<MultiIndex> next;
    const auto& xs = space.independents();
    for (const auto& idx : layer) {
      // Extend only with variables not preceding the last one in declaration
      // order so each multiset is produced once.
      std::size_t start = 0;
      if (!idx.empty()) {
        for (std::size_t k = 0; k < xs.size(); ++k)
          if (idx.count(xs[k]) > 0) start = k;
      }
      for (std::size_t k = start; k < xs.size(); ++k) next.push_back(idx.plus(xs[k]));
    }
    layer = std::move(next);
  }
  return out;
}

/// Coefficients zeta^a_J of the prolonged generator for every |J| <= order,
/// keyed by the jet coordinate u^a_J:
///   zeta^a_J = D_J(W^a) + xi^j u^a_{J,j}.
inline std::map<Atom, Expr> prolong(const Generator& X, const JetSpace& space, int order) {
  X.validate(space);
  auto w = characteristic_components(X, space);
  std::map<Atom, Expr> out;
  for (std::size_t a = 0; a < space.m(); ++a) {
    const auto& u = space.dependents()[a];
    for (const auto& idx : multi_indices(space, 0, order)) {
      Expr zeta = total_derivative(w[a], idx, space);
      for (const auto& x : space.independents()) {
        Expr xi = X.xi_of(x);
        if (!xi.is_zero()) zeta += xi * Expr(space.u(u, idx.plus(x)));
      }
      out.emplace(space.u(u, idx), zeta);
    }
  }
  return out;
}

/// pr X (F): xi^i times the explicit x^i-derivative plus zeta_J dF/du_J.
inline Expr apply_prolonged(const Generator& X, const Expr& f, const JetSpace& space) {
  int order = 0;
  for (Atom a : f.atoms())
    if (space.is_u_atom(a)) order = std::max(order, a.order());
  auto zeta = prolong(X, space, order);
  Expr r;
  for (const auto& x : space.independents()) {
    Expr xi = X.xi_of(x);
    if (!xi.is_zero()) r += xi * explicit_partial(f, x, space);
  }
  for (Atom a : f.atoms()) {
    if (!space.is_u_atom(a)) continue;
    r += zeta.at(a) * f.partial(a);
  }
  return r;
}

}  // namespace adjflux
