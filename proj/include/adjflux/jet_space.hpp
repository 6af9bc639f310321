#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adjflux/atom.hpp"
#include "adjflux/error.hpp"

namespace adjflux {

/// Declared arbitrary function such as f(t) or phi(t,x).
struct FunctionFamily {
  std::string name;
  std::vector<std::string> args;

  friend bool operator==(const FunctionFamily&, const FunctionFamily&) = default;
};

inline constexpr int kDefaultMaxOrder = 10;

/// Independent variables x, dependent variables u, their paired adjoint
/// variables v (one per u) and the arbitrary functions of a problem.
class JetSpace {
 public:
  JetSpace() = default;
  JetSpace(std::vector<std::string> independents, std::vector<std::string> dependents,
           std::vector<std::string> adjoints = {}, std::vector<FunctionFamily> functions = {},
           int max_order = kDefaultMaxOrder)
      : independents_(std::move(independents)),
        dependents_(std::move(dependents)),
        adjoints_(std::move(adjoints)),
        functions_(std::move(functions)),
        max_order_(max_order) {
    if (adjoints_.empty()) adjoints_ = default_adjoint_names(dependents_);
    validate();
  }

  /// "v" for a single dependent, otherwise "v1", "v2", ...
  static std::vector<std::string> default_adjoint_names(const std::vector<std::string>& deps) {
    if (deps.size() == 1) return {"v"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < deps.size(); ++i) out.push_back("v" + std::to_string(i + 1));
    return out;
  }

  const std::vector<std::string>& independents() const { return independents_; }
  const std::vector<std::string>& dependents() const { return dependents_; }
  const std::vector<std::string>& adjoints() const { return adjoints_; }
  const std::vector<FunctionFamily>& functions() const { return functions_; }
  int max_order() const { return max_order_; }
  std::size_t m() const { return dependents_.size(); }

  JetSpace with_max_order(int order) const {
    JetSpace s = *this;
    s.max_order_ = order;
    return s;
  }

  bool is_independent(const std::string& n) const { return contains(independents_, n); }
  bool is_dependent(const std::string& n) const { return contains(dependents_, n); }
  bool is_adjoint(const std::string& n) const { return contains(adjoints_, n); }
  const FunctionFamily* function(const std::string& n) const {
    auto it = std::find_if(functions_.begin(), functions_.end(), [&](const FunctionFamily& f) { return f.name == n; });
    return it == functions_.end() ? nullptr : &*it;
  }

  /// Position in the declaration order; throws for unknown names.
  std::size_t independent_position(const std::string& n) const { return position(independents_, n, "independent"); }
  std::size_t dependent_position(const std::string& n) const { return position(dependents_, n, "dependent"); }
  std::size_t adjoint_position(const std::string& n) const { return position(adjoints_, n, "adjoint"); }

  const std::string& adjoint_of(const std::string& dep) const { return adjoints_[dependent_position(dep)]; }
  const std::string& dependent_of(const std::string& adj) const { return dependents_[adjoint_position(adj)]; }

  Atom x(const std::string& n) const {
    independent_position(n);
    return Atom::independent(n);
  }
  Atom u(const std::string& dep, const MultiIndex& idx = {}) const {
    dependent_position(dep);
    return jet_atom(dep, idx);
  }
  Atom v(const std::string& dep, const MultiIndex& idx = {}) const { return jet_atom(adjoint_of(dep), idx); }
  Atom f(const std::string& name, const MultiIndex& idx = {}) const {
    const auto* fam = function(name);
    if (!fam) throw Error("unknown arbitrary function '" + name + "'");
    for (const auto& var : idx.vars())
      if (std::find(fam->args.begin(), fam->args.end(), var) == fam->args.end())
        throw Error("'" + name + "' does not depend on '" + var + "'");
    return Atom::function(name, fam->args, idx);
  }

  bool is_u_atom(Atom a) const { return a.is_jet() && is_dependent(a.name()); }
  bool is_v_atom(Atom a) const { return a.is_jet() && is_adjoint(a.name()); }

  /// Elimination ranking key: counts of each independent in declaration
  /// order, so derivatives in the first independent dominate.
  std::vector<int> elimination_key(const MultiIndex& idx) const {
    std::vector<int> key;
    key.reserve(independents_.size());
    for (const auto& x : independents_) key.push_back(idx.count(x));
    return key;
  }

  friend bool operator==(const JetSpace&, const JetSpace&) = default;

 private:
  static bool contains(const std::vector<std::string>& v, const std::string& n) {
    return std::find(v.begin(), v.end(), n) != v.end();
  }
  static std::size_t position(const std::vector<std::string>& v, const std::string& n, const char* what) {
    auto it = std::find(v.begin(), v.end(), n);
    if (it == v.end()) throw Error(std::string("'") + n + "' is not a declared " + what + " variable");
    return static_cast<std::size_t>(it - v.begin());
  }

  Atom jet_atom(const std::string& name, const MultiIndex& idx) const {
    for (const auto& var : idx.vars()) independent_position(var);
    if (idx.order() > max_order_)
      throw MathError("jet order " + std::to_string(idx.order()) + " exceeds the cap of " +
                      std::to_string(max_order_));
    return Atom::jet(name, idx);
  }

  void validate() const {
    if (adjoints_.size() != dependents_.size())
      throw Error("the number of adjoint variables must equal the number of dependent variables");
    std::set<std::string> seen;
    auto add = [&](const std::string& n) {
      if (!seen.insert(n).second) throw Error("duplicate symbol '" + n + "'");
    };
    for (const auto& n : independents_) add(n);
    for (const auto& n : dependents_) add(n);
    for (const auto& n : adjoints_) add(n);
    for (const auto& f : functions_) {
      add(f.name);
      if (f.args.empty()) throw Error("arbitrary function '" + f.name + "' needs at least one argument");
      for (const auto& a : f.args)
        if (!is_independent(a)) throw Error("argument '" + a + "' of '" + f.name + "' is not an independent variable");
    }
  }

  std::vector<std::string> independents_;
  std::vector<std::string> dependents_;
  std::vector<std::string> adjoints_;
  std::vector<FunctionFamily> functions_;
  int max_order_ = kDefaultMaxOrder;
};

}  // namespace adjflux
