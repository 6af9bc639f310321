#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>

#include "adjflux/atom.hpp"
#include "adjflux/polynomial.hpp"
#include "adjflux/rational.hpp"

namespace adjflux {

/// Immutable symbolic expression held in canonical form: a single quotient
/// numerator/denominator of expanded Laurent polynomials.
///
/// Canonical form rules:
///  * a monomial denominator c*m is folded into the numerator (x/2 -> 1/2*x,
///    u_t/u -> u^-1*u_t), so the denominator is 1 for every Laurent polynomial;
///  * otherwise numerator and denominator carry no negative exponents, share no
///    monomial factor, the denominator's lex-leading coefficient is 1, and the
///    pair is replaced by the quotient when the division is exact.
///
/// Every arithmetic operation returns a canonical value; there is no way to
/// build an unnormalized Expr (raw trees live in tree.hpp).
class Expr {
 public:
  Expr() : rep_(zero_rep()) {}
  Expr(long c) : Expr(Poly(c)) {}               // NOLINT(google-explicit-constructor)
  Expr(int c) : Expr(Poly(static_cast<long>(c))) {}  // NOLINT(google-explicit-constructor)
  Expr(const Rational& c) : Expr(Poly(c)) {}    // NOLINT(google-explicit-constructor)
  Expr(Atom a) : Expr(Poly::atom(a)) {}         // NOLINT(google-explicit-constructor)
  explicit Expr(Poly p) : rep_(std::make_shared<const Rep>(Rep{std::move(p), Poly(1)})) {}

  /// Normalized quotient; throws MathError("zero denominator") when den == 0.
  static Expr ratio(Poly num, Poly den) {
    if (den.is_zero()) throw MathError("zero denominator");
    if (num.is_zero()) return Expr();
    if (den.is_monomial()) {
      const auto& [m, c] = den.terms().front();
      return Expr(num.times(m.inverse(), Rational(1) / c));
    }
    Monomial g = Monomial::min_exponents(num.monomial_content(), den.monomial_content());
    if (!g.is_one()) {
      Monomial gi = g.inverse();
      num = num.times(gi);
      den = den.times(gi);
    }
    Rational lc = den.lex_leading().second;
    if (lc != 1) {
      Rational inv = Rational(1) / lc;
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
    Poly q;
    if (num.divide_exact(den, q)) return Expr(std::move(q));
    Expr e;
    e.rep_ = std::make_shared<const Rep>(Rep{std::move(num), std::move(den)});
    return e;
  }

  const Poly& numerator() const { return rep_->num; }
  const Poly& denominator() const { return rep_->den; }
  bool is_polynomial() const { return rep_->den.is_one(); }

  bool is_zero() const { return rep_->num.is_zero(); }
  bool is_constant() const { return is_polynomial() && rep_->num.is_constant(); }
  Rational constant_value() const { return rep_->num.constant_value(); }
  bool is_atom() const {
    return is_polynomial() && rep_->num.is_monomial() && rep_->num.terms()[0].second == 1 &&
           rep_->num.terms()[0].first.factors().size() == 1 && rep_->num.terms()[0].first.factors()[0].second == 1;
  }
  Atom as_atom() const { return rep_->num.terms()[0].first.factors()[0].first; }

  std::set<Atom> atoms() const {
    auto out = rep_->num.atoms();
    auto d = rep_->den.atoms();
    out.insert(d.begin(), d.end());
    return out;
  }
  bool contains(Atom a) const { return rep_->num.contains(a) || rep_->den.contains(a); }

  Expr operator-() const {
    if (is_zero()) return *this;
    Expr e;
    e.rep_ = std::make_shared<const Rep>(Rep{-rep_->num, rep_->den});
    return e;
  }

  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_polynomial() && b.is_polynomial()) return Expr(a.numerator() + b.numerator());
    if (a.denominator() == b.denominator()) return ratio(a.numerator() + b.numerator(), a.denominator());
    return ratio(a.numerator() * b.denominator() + b.numerator() * a.denominator(),
                 a.denominator() * b.denominator());
  }
  friend Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    if (a.is_polynomial() && b.is_polynomial()) return Expr(a.numerator() * b.numerator());
    return ratio(a.numerator() * b.numerator(), a.denominator() * b.denominator());
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw MathError("zero denominator");
    if (a.is_zero()) return Expr();
    return ratio(a.numerator() * b.denominator(), a.denominator() * b.numerator());
  }
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }

  Expr pow(int k) const {
    if (k == 0) return Expr(1);
    if (k < 0) {
      if (is_zero()) throw MathError("zero denominator");
      return ratio(rep_->den.pow(static_cast<unsigned>(-k)), rep_->num.pow(static_cast<unsigned>(-k)));
    }
    if (is_polynomial() && rep_->num.is_monomial()) {
      const auto& [m, c] = rep_->num.terms()[0];
      Rational ck = 1;
      for (int i = 0; i < k; ++i) ck *= c;
      return Expr(Poly::term(m.pow(k), ck));
    }
    return ratio(rep_->num.pow(static_cast<unsigned>(k)), rep_->den.pow(static_cast<unsigned>(k)));
  }

  /// Partial derivative treating every other atom as independent.
  Expr partial(Atom a) const {
    if (is_polynomial()) return Expr(rep_->num.partial(a));
    const Poly& n = rep_->num;
    const Poly& d = rep_->den;
    return ratio(n.partial(a) * d - n * d.partial(a), d * d);
  }

  /// Simultaneous substitution of atoms by expressions.
  Expr substitute(const std::map<Atom, Expr>& values) const {
    if (values.empty()) return *this;
    Expr n = substitute_poly(rep_->num, values);
    if (is_polynomial()) return n;
    return n / substitute_poly(rep_->den, values);
  }

  /// Structural identity of canonical forms.
  bool identical(const Expr& o) const { return rep_ == o.rep_ || (rep_->num == o.rep_->num && rep_->den == o.rep_->den); }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.identical(b)) return true;
    if (a.is_polynomial() && b.is_polynomial()) return false;
    return (a - b).is_zero();
  }
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
    if (auto c = a.rep_->num <=> b.rep_->num; c != 0) return c;
    return a.rep_->den <=> b.rep_->den;
  }

 private:
  struct Rep {
    Poly num;
    Poly den;
  };

  static std::shared_ptr<const Rep> zero_rep() {
    static const auto rep = std::make_shared<const Rep>(Rep{Poly(), Poly(1)});
    return rep;
  }

  static Expr substitute_poly(const Poly& p, const std::map<Atom, Expr>& values) {
    bool touched = false;
    for (const auto& [m, c] : p.terms()) {
      for (const auto& [a, e] : m.factors())
        if (values.count(a)) touched = true;
      if (touched) break;
    }
    if (!touched) return Expr(p);

    // Terms whose substituted factor stays polynomial are summed as polynomials.
    std::vector<Poly::Term> kept;
    Poly poly_sum;
    Expr rational_sum;
    std::map<std::pair<Atom, int>, Expr> power_cache;
    auto power = [&](Atom a, int e) -> const Expr& {
      auto key = std::make_pair(a, e);
      auto it = power_cache.find(key);
      if (it == power_cache.end()) it = power_cache.emplace(key, values.at(a).pow(e)).first;
      return it->second;
    };
    for (const auto& [m, c] : p.terms()) {
      Monomial rest;
      Expr factor(Poly::term(Monomial{}, c));
      bool hit = false;
      for (const auto& [a, e] : m.factors()) {
        if (values.count(a)) {
          factor = factor * power(a, e);
          hit = true;
        } else {
          rest = rest.times(a, e);
        }
      }
      if (!hit) {
        kept.emplace_back(m, c);
        continue;
      }
      if (factor.is_polynomial()) {
        poly_sum = poly_sum + factor.numerator().times(rest);
      } else {
        rational_sum = rational_sum + factor * Expr(Poly::term(rest, 1));
      }
    }
    return Expr(poly_sum + Poly::from_terms(std::move(kept))) + rational_sum;
  }

  std::shared_ptr<const Rep> rep_;
};

/// Returns c != 0 with a == c*b when such a rational constant exists.
/// Two zero expressions are proportional with c = 1.
inline std::optional<Rational> equal_mod_nonzero_constant(const Expr& a, const Expr& b) {
  if (a.is_zero() && b.is_zero()) return Rational(1);
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  Expr q = a / b;
  if (q.is_constant()) return q.constant_value();
  return std::nullopt;
}

/// Identity on canonical values; raw trees are normalized by the overload in
/// tree.hpp.
inline Expr normalize(const Expr& e) { return e; }

}  // namespace adjflux
