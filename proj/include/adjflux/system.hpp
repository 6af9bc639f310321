#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adjflux/jetcalc.hpp"
#include "adjflux/print.hpp"

namespace adjflux {

/// F = 0 with an optional user-chosen leading derivative.
struct Equation {
  std::string name;
  Expr lhs;
  std::optional<Atom> lead;
};

/// System F_a(x, u, u_(1), ..., u_(s)) = 0 of m equations in m dependents,
/// plus optional relations among arbitrary functions (for example an
/// adjoint-equation constraint phi_t + phi_xx = 0 on a placeholder phi).
class DiffSystem {
 public:
  DiffSystem(JetSpace space, std::vector<Equation> equations, std::vector<Equation> constraints = {})
      : space_(std::move(space)), equations_(std::move(equations)), constraints_(std::move(constraints)) {
    validate();
  }

  const JetSpace& space() const { return space_; }
  const std::vector<Equation>& equations() const { return equations_; }
  const std::vector<Equation>& constraints() const { return constraints_; }
  std::size_t m() const { return equations_.size(); }

  /// Highest derivative order of any u-coordinate in the equations.
  int order() const {
    int s = 0;
    for (const auto& eq : equations_)
      for (Atom a : eq.lhs.atoms())
        if (space_.is_u_atom(a)) s = std::max(s, a.order());
    return s;
  }

  DiffSystem with_equations(std::vector<Equation> eqs) const { return DiffSystem(space_, std::move(eqs), constraints_); }
  DiffSystem with_space(JetSpace space) const { return DiffSystem(std::move(space), equations_, constraints_); }

 private:
  void validate() const {
    if (equations_.size() != space_.m())
      throw Error("a system needs as many equations (" + std::to_string(equations_.size()) +
                  ") as dependent variables (" + std::to_string(space_.m()) + ")");
    std::vector<Atom> leads;
    auto check = [&](const Equation& eq, bool constraint) {
      if (eq.lhs.is_zero()) throw Error("equation '" + eq.name + "' is identically zero");
      for (Atom a : eq.lhs.atoms()) {
        if (space_.is_v_atom(a)) throw Error("equation '" + eq.name + "' uses adjoint variable '" + a.name() + "'");
        if (a.is_jet() && !space_.is_dependent(a.name())) throw Error("unknown dependent '" + a.name() + "'");
        if (constraint && a.is_jet())
          throw Error("constraint '" + eq.name + "' may only involve arbitrary functions and independents");
      }
      if (eq.lead) {
        if (!eq.lhs.contains(*eq.lead))
          throw Error("equation '" + eq.name + "' does not contain its lead " + to_string(*eq.lead));
        for (Atom other : leads)
          if (other == *eq.lead) throw Error("lead " + to_string(other) + " is declared twice");
        leads.push_back(*eq.lead);
      }
    };
    for (const auto& eq : equations_) check(eq, false);
    for (const auto& eq : constraints_) check(eq, true);
  }

  JetSpace space_;
  std::vector<Equation> equations_;
  std::vector<Equation> constraints_;
};

enum class SubstitutionClass { strict, quasi, general };

inline const char* to_string(SubstitutionClass c) {
  switch (c) {
    case SubstitutionClass::strict: return "strict";
    case SubstitutionClass::quasi: return "quasi";
    case SubstitutionClass::general: return "general";
  }
  return "?";
}

/// v^a = phi^a(x, u): keyed by the dependent u^a whose adjoint it replaces.
/// Arbitrary functions of the independents may appear in phi.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::string name, std::map<std::string, Expr> components)
      : name_(std::move(name)), components_(std::move(components)) {}

  const std::string& name() const { return name_; }
  const std::map<std::string, Expr>& components() const { return components_; }
  Expr component(const std::string& dep) const {
    auto it = components_.find(dep);
    return it == components_.end() ? Expr() : it->second;
  }

  /// Checks point-substitution form and that not all components vanish;
  /// returns the class tag.
  SubstitutionClass validate(const JetSpace& space) const {
    bool any_nonzero = false;
    bool strict = true;
    bool quasi = true;
    for (const auto& dep : space.dependents()) {
      Expr phi = component(dep);
      if (!phi.is_zero()) any_nonzero = true;
      if (!(phi.is_atom() && phi.as_atom() == space.u(dep))) strict = false;
    }
    for (const auto& [dep, phi] : components_) {
      space.dependent_position(dep);
      for (Atom a : phi.atoms()) {
        if (a.is_jet()) {
          if (!space.is_dependent(a.name()))
            throw MathError("substitution may only involve x and u, found '" + to_string(a) + "'");
          if (a.order() > 0) throw MathError("differential substitutions out of scope (found " + to_string(a) + ")");
        } else {
          quasi = false;
        }
      }
    }
    if (!any_nonzero) throw MathError("substitution components vanish simultaneously");
    if (strict) return SubstitutionClass::strict;
    return quasi ? SubstitutionClass::quasi : SubstitutionClass::general;
  }

  /// Values for every adjoint coordinate occurring in `e`: v_J := D_J(phi).
  std::map<Atom, Expr> adjoint_values(const Expr& e, const JetSpace& space) const {
    std::map<Atom, Expr> values;
    for (Atom a : e.atoms()) {
      if (!space.is_v_atom(a)) continue;
      values.emplace(a, total_derivative(component(space.dependent_of(a.name())), a.index(), space));
    }
    return values;
  }

  Expr apply(const Expr& e, const JetSpace& space) const { return e.substitute(adjoint_values(e, space)); }

  Substitution scaled(const Rational& c) const {
    Substitution s = *this;
    for (auto& [k, e] : s.components_) e = Expr(c) * e;
    return s;
  }

 private:
  std::string name_;
  std::map<std::string, Expr> components_;
};

}  // namespace adjflux
