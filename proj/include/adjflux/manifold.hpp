#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "adjflux/eval.hpp"
#include "adjflux/jetcalc.hpp"
#include "adjflux/system.hpp"

namespace adjflux {

/// Names one prolonged equation D_K(F) of the system (or of a constraint).
struct CertificateKey {
  bool constraint = false;
  std::size_t equation = 0;
  MultiIndex prolongation;

  friend auto operator<=>(const CertificateKey&, const CertificateKey&) = default;
  friend bool operator==(const CertificateKey&, const CertificateKey&) = default;
};

/// e - normal_form = sum over keys of coefficient * D_K(F).
using Certificate = std::map<CertificateKey, Expr>;

struct Reduction {
  Expr normal_form;
  Certificate certificate;
};

inline void accumulate(Certificate& into, const Certificate& from, const Expr& factor = Expr(1)) {
  for (const auto& [k, c] : from) {
    Expr v = into[k] + factor * c;
    if (v.is_zero())
      into.erase(k);
    else
      into[k] = v;
  }
}

/// One rewrite rule lead -> solved form of F = 0.
struct Rule {
  bool constraint = false;
  std::size_t equation = 0;
  std::string name;
  Atom lead;
  Expr lhs;
  Expr lead_coefficient;  // dF/d(lead); F = p*lead + rest
  Expr rhs;               // -rest/p
};

namespace detail {

/// Highest atom under the elimination ranking (counts per independent in
/// declaration order, then canonical order).
inline bool elimination_less(Atom a, Atom b, const JetSpace& space) {
  auto ka = space.elimination_key(a.index());
  auto kb = space.elimination_key(b.index());
  if (ka != kb) return ka < kb;
  return a < b;
}

inline bool is_affine_in(const Expr& f, Atom a) {
  if (f.denominator().contains(a)) return false;
  return f.numerator().max_exponent(a) == 1 && f.numerator().min_exponent(a) == 0;
}

inline std::optional<Atom> default_lead(const Expr& f, const JetSpace& space,
                                        const std::function<bool(Atom)>& candidate) {
  std::optional<Atom> best;
  for (Atom a : f.atoms()) {
    if (!candidate(a) || !is_affine_in(f, a)) continue;
    if (!best || elimination_less(*best, a, space)) best = a;
  }
  return best;
}

}  // namespace detail

/// Rewrite system of leading derivatives for a DiffSystem. Prolonged rules
/// D_K(lead) -> ... are derived on demand and cached; the cache is shared by
/// copies and safe for concurrent use.
class Ranking {
 public:
  explicit Ranking(const DiffSystem& sys) : space_(sys.space()), cache_(std::make_shared<Cache>()) {
    auto add = [&](const Equation& eq, bool constraint, std::size_t index) {
      std::optional<Atom> lead = eq.lead;
      if (!lead) {
        if (constraint) {
          lead = detail::default_lead(eq.lhs, space_, [](Atom a) { return a.is_function(); });
        } else {
          const auto& dep = space_.dependents()[index];
          lead = detail::default_lead(eq.lhs, space_, [&](Atom a) { return a.is_jet() && a.name() == dep; });
        }
        if (!lead) throw MathError("cannot solve equation '" + eq.name + "' for a leading derivative");
      }
      if (!detail::is_affine_in(eq.lhs, *lead))
        throw MathError("cannot solve for leading derivative " + to_string(*lead) + " in '" + eq.name + "'");
      Expr p = eq.lhs.partial(*lead);
      Rule r{constraint, index, eq.name, *lead, eq.lhs, p, -(eq.lhs - p * Expr(*lead)) / p};
      rules_.push_back(std::move(r));
    };
    for (std::size_t i = 0; i < sys.equations().size(); ++i) add(sys.equations()[i], false, i);
    for (std::size_t i = 0; i < sys.constraints().size(); ++i) add(sys.constraints()[i], true, i);

    for (const auto& r : rules_) {
      for (const auto& other : rules_)
        if (&other != &r && matches(other, r.lead) && matches(r, other.lead))
          throw MathError("leading derivatives " + to_string(r.lead) + " and " + to_string(other.lead) + " coincide");
      for (Atom a : r.rhs.atoms())
        if (matches(r, a))
          throw MathError("rewrite cycle: solved form of '" + r.name + "' contains " + to_string(a));
    }
  }

  const JetSpace& space() const { return space_; }
  const std::vector<Rule>& rules() const { return rules_; }

  const Rule& rule_for(const CertificateKey& k) const {
    for (const auto& r : rules_)
      if (r.constraint == k.constraint && r.equation == k.equation) return r;
    throw Error("no rule for certificate key");
  }

  /// Rule whose lead has `a` as a prolongation, if any.
  const Rule* match(Atom a) const {
    for (const auto& r : rules_)
      if (matches(r, a)) return &r;
    return nullptr;
  }
  bool reducible(Atom a) const { return match(a) != nullptr; }

  /// Normal form modulo the solution manifold and the certificate
  /// e = normal_form + sum_K c_K D_K(F).
  Reduction reduce(const Expr& e) const {
    std::vector<Atom> stack;
    return reduce_impl(e, stack);
  }

  /// Prolonged equation for a reducible atom a = D_K(lead): G = D_K(F) written
  /// as p*a + rest (both free of a).
  struct Prolonged {
    const Rule* rule;
    MultiIndex prolongation;
    Expr equation;     // G
    Expr coefficient;  // p
    Expr rest;         // G - p*a
  };

  Prolonged prolonged(Atom a) const { return atom_entry(a, nullptr)->prolonged; }

 private:
  struct AtomEntry {
    Prolonged prolonged;
    Expr normal_form;
    Certificate certificate;
  };
  struct Cache {
    std::mutex mu;
    std::map<Atom, std::shared_ptr<const AtomEntry>> entries;
  };

  static bool matches(const Rule& r, Atom a) {
    return a.kind() == r.lead.kind() && a.name() == r.lead.name() && a.index().contains(r.lead.index());
  }

  std::shared_ptr<const AtomEntry> atom_entry(Atom a, std::vector<Atom>* stack) const {
    {
      std::lock_guard lock(cache_->mu);
      if (auto it = cache_->entries.find(a); it != cache_->entries.end()) return it->second;
    }
    std::vector<Atom> local;
    std::vector<Atom>& st = stack ? *stack : local;
    if (std::find(st.begin(), st.end(), a) != st.end())
      throw MathError("rewrite cycle while reducing " + to_string(a));
    if (a.order() > space_.max_order())
      throw MathError("reduction exceeds the jet-order cap at " + to_string(a));

    const Rule* r = match(a);
    auto entry = std::make_shared<AtomEntry>();
    MultiIndex k = a.index().minus(r->lead.index());
    Expr g = total_derivative(r->lhs, k, space_);
    Expr p = g.partial(a);
    if (!detail::is_affine_in(g, a)) throw MathError("prolonged equation is not affine in " + to_string(a));
    Expr rest = g - p * Expr(a);
    entry->prolonged = Prolonged{r, k, g, p, rest};

    st.push_back(a);
    Reduction red = reduce_impl(-rest / p, st);
    st.pop_back();
    entry->normal_form = red.normal_form;
    entry->certificate = std::move(red.certificate);
    accumulate(entry->certificate, Certificate{{CertificateKey{r->constraint, r->equation, k}, Expr(1) / p}});

    std::lock_guard lock(cache_->mu);
    return cache_->entries.emplace(a, std::move(entry)).first->second;
  }

  Reduction reduce_impl(const Expr& e, std::vector<Atom>& stack) const {
    std::vector<Atom> targets;
    for (Atom a : e.atoms())
      if (reducible(a)) targets.push_back(a);
    Reduction out{e, {}};
    for (Atom a : targets) {
      auto entry = atom_entry(a, &stack);
      const Expr& value = entry->normal_form;
      const Expr& cur = out.normal_form;
      Expr next;
      Expr quotient;
      if (cur.denominator().contains(a) || cur.numerator().min_exponent(a) < 0) {
        next = cur.substitute({{a, value}});
        quotient = (cur - next) / (Expr(a) - value);
      } else {
        // Synthetic division of the numerator by (a - value).
        auto coeffs = cur.numerator().coefficients_in(a);
        int degree = coeffs.rbegin()->first;
        Expr q_acc;  // quotient polynomial in a, built by Horner
        Expr carry;
        Expr quotient_poly;
        for (int k = degree; k >= 1; --k) {
          auto it = coeffs.find(k);
          Expr nk = it == coeffs.end() ? Expr() : Expr(it->second);
          carry = nk + value * carry;  // q_{k-1}
          quotient_poly += carry * Expr(Atom(a)).pow(k - 1);
        }
        auto it0 = coeffs.find(0);
        Expr n0 = it0 == coeffs.end() ? Expr() : Expr(it0->second);
        Expr den = Expr::ratio(Poly(1), cur.denominator());
        next = (n0 + value * carry) * den;
        quotient = quotient_poly * den;
      }
      accumulate(out.certificate, entry->certificate, quotient);
      out.normal_form = next;
    }
    return out;
  }

  JetSpace space_;
  std::vector<Rule> rules_;
  std::shared_ptr<Cache> cache_;
};

inline Ranking solve_for_leading(const DiffSystem& sys) { return Ranking(sys); }

inline Reduction reduce(const Expr& e, const Ranking& ranking) { return ranking.reduce(e); }

/// "F1", "D[F1,x]" style label of a certificate entry.
inline std::string certificate_label(const CertificateKey& k, const Ranking& ranking) {
  const std::string& name = ranking.rule_for(k).name;
  if (k.prolongation.empty()) return name;
  std::string s = "D[" + name;
  for (const auto& v : k.prolongation.vars()) s += "," + v;
  return s + "]";
}

/// Draws jet points on the solution manifold: free coordinates uniform in
/// [-2,-0.5] U [0.5,2], leading coordinates solved from the prolonged
/// equations D_K(F) = 0 at the point.
class ManifoldSampler {
 public:
  ManifoldSampler(const Ranking& ranking, std::uint64_t seed) : ranking_(ranking), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  /// Functions with a polynomial realization need no point value.
  void set_realization(FuncRealization funcs) { funcs_ = std::move(funcs); }
  const FuncRealization& realization() const { return funcs_; }

  /// A fresh point assigning every atom needed to evaluate `atoms`.
  Point sample(const std::set<Atom>& atoms) {
    Point p;
    for (Atom a : atoms) assign(a, p, 0);
    return p;
  }

  double draw() {
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::bernoulli_distribution sign(0.5);
    double v = mag(rng_);
    return sign(rng_) ? v : -v;
  }

 private:
  void assign(Atom a, Point& p, int depth) {
    if (p.count(a)) return;
    if (depth > 4 * kDefaultMaxOrder * 8) throw MathError("sampling recursion too deep at " + to_string(a));
    if (a.is_function() && a.args().size() == 1 && funcs_.has(a.name()) && !ranking_.reducible(a)) {
      assign(Atom::independent(a.args()[0]), p, depth + 1);
      return;
    }
    if (!ranking_.reducible(a)) {
      p[a] = draw();
      return;
    }
    auto pr = ranking_.prolonged(a);
    for (Atom b : pr.rest.atoms()) assign(b, p, depth + 1);
    for (Atom b : pr.coefficient.atoms()) assign(b, p, depth + 1);
    double coef = eval_numeric(pr.coefficient, p, funcs_);
    if (std::abs(coef) < 1e-12) throw EvalError("numeric singularity");
    p[a] = -eval_numeric(pr.rest, p, funcs_) / coef;
  }

  const Ranking& ranking_;
  std::mt19937_64 rng_;
  FuncRealization funcs_;
};

}  // namespace adjflux
