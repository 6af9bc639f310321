#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "adjflux/atom.hpp"
#include "adjflux/rational.hpp"

namespace adjflux {

/// Product of atoms raised to nonzero integer powers (negative powers allowed,
/// so Laurent monomials such as x^2*u^-1 are a single term).
class Monomial {
 public:
  using Factor = std::pair<Atom, int>;

  Monomial() = default;
  static Monomial of(Atom a, int exponent = 1) {
    Monomial m;
    if (exponent != 0) m.factors_.emplace_back(a, exponent);
    return m;
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  int exponent(Atom a) const {
    auto it = find(a);
    return it == factors_.end() ? 0 : it->second;
  }
  bool contains(Atom a) const { return find(a) != factors_.end(); }

  bool has_negative_exponent() const {
    return std::any_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.second < 0; });
  }

  int total_degree() const {
    int d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
  }

  /// Multiplies by a^delta.
  Monomial times(Atom a, int delta) const {
    Monomial r = *this;
    auto it = std::lower_bound(r.factors_.begin(), r.factors_.end(), a,
                               [](const Factor& f, Atom x) { return f.first < x; });
    if (it != r.factors_.end() && it->first == a) {
      it->second += delta;
      if (it->second == 0) r.factors_.erase(it);
    } else if (delta != 0) {
      r.factors_.insert(it, Factor{a, delta});
    }
    return r;
  }

  Monomial without(Atom a) const {
    Monomial r = *this;
    auto it = find(a);
    if (it != factors_.end()) r.factors_.erase(r.factors_.begin() + (it - factors_.begin()));
    return r;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
      if (i->first < j->first) {
        r.factors_.push_back(*i++);
      } else if (j->first < i->first) {
        r.factors_.push_back(*j++);
      } else {
        int e = i->second + j->second;
        if (e != 0) r.factors_.emplace_back(i->first, e);
        ++i;
        ++j;
      }
    }
    r.factors_.insert(r.factors_.end(), i, a.factors_.end());
    r.factors_.insert(r.factors_.end(), j, b.factors_.end());
    return r;
  }

  Monomial inverse() const {
    Monomial r = *this;
    for (auto& f : r.factors_) f.second = -f.second;
    return r;
  }

  Monomial pow(int k) const {
    if (k == 0) return {};
    Monomial r = *this;
    for (auto& f : r.factors_) f.second *= k;
    return r;
  }

  /// Componentwise minimum of exponents (absent atoms count as exponent 0).
  static Monomial min_exponents(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
        if (i->second < 0) r.factors_.push_back(*i);
        ++i;
      } else if (i == a.factors_.end() || j->first < i->first) {
        if (j->second < 0) r.factors_.push_back(*j);
        ++j;
      } else {
        int e = std::min(i->second, j->second);
        if (e != 0) r.factors_.emplace_back(i->first, e);
        ++i;
        ++j;
      }
    }
    return r;
  }

  /// Pure lexicographic comparison on exponent vectors over the atom order
  /// (an admissible monomial order, used for exact division).
  static std::strong_ordering lex(const Monomial& a, const Monomial& b) {
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
      if (i->first != j->first) {
        // The smaller atom is present in only one side.
        if (i->first < j->first) return i->second > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
        return j->second > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      }
      if (i->second != j->second) return i->second <=> j->second;
      ++i;
      ++j;
    }
    if (i != a.factors_.end()) return i->second > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
    if (j != b.factors_.end()) return j->second > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  bool divides(const Monomial& other) const {
    for (const auto& [a, e] : factors_)
      if (other.exponent(a) < e) return false;
    return true;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    // Graded, then lexicographic.
    if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
    return std::lexicographical_compare_three_way(
        a.factors_.begin(), a.factors_.end(), b.factors_.begin(), b.factors_.end(),
        [](const Factor& x, const Factor& y) {
          if (auto c = x.first <=> y.first; c != 0) return c;
          return x.second <=> y.second;
        });
  }

 private:
  std::vector<Factor>::const_iterator find(Atom a) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), a,
                               [](const Factor& f, Atom x) { return f.first < x; });
    return (it != factors_.end() && it->first == a) ? it : factors_.end();
  }

  std::vector<Factor> factors_;
};

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
/// Terms are kept sorted by monomial with nonzero coefficients.
class Poly {
 public:
  using Term = std::pair<Monomial, Rational>;

  Poly() = default;
  Poly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace_back(Monomial{}, canonical(c));
  }
  Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static Poly term(Monomial m, Rational c) {
    Poly p;
    if (c != 0) p.terms_.emplace_back(std::move(m), canonical(std::move(c)));
    return p;
  }
  static Poly atom(Atom a, int exponent = 1) { return term(Monomial::of(a, exponent), 1); }

  /// Builds from arbitrary (possibly repeated, unsorted) terms.
  static Poly from_terms(std::vector<Term> terms) {
    for (auto& t : terms) t.second.canonicalize();
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    Poly p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == t.first) {
        p.terms_.back().second += t.second;
        if (p.terms_.back().second == 0) p.terms_.pop_back();
      } else if (t.second != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  Rational constant_value() const { return terms_.empty() ? Rational(0) : terms_[0].second; }
  bool is_monomial() const { return terms_.size() == 1; }

  bool is_one() const { return terms_.size() == 1 && terms_[0].first.is_one() && terms_[0].second == 1; }

  std::set<Atom> atoms() const {
    std::set<Atom> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [a, e] : m.factors()) out.insert(a);
    return out;
  }

  bool contains(Atom a) const {
    return std::any_of(terms_.begin(), terms_.end(), [a](const Term& t) { return t.first.contains(a); });
  }

  bool has_negative_exponent() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.first.has_negative_exponent(); });
  }

  int max_exponent(Atom a) const {
    int best = 0;
    for (const auto& t : terms_) best = std::max(best, t.first.exponent(a));
    return best;
  }
  int min_exponent(Atom a) const {
    int best = 0;
    for (const auto& t : terms_) best = std::min(best, t.first.exponent(a));
    return best;
  }

  /// Groups terms by the exponent of `a`; keys are exponents, values are
  /// coefficients free of `a`.
  std::map<int, Poly> coefficients_in(Atom a) const {
    std::map<int, std::vector<Term>> groups;
    for (const auto& [m, c] : terms_) groups[m.exponent(a)].emplace_back(m.without(a), c);
    std::map<int, Poly> out;
    for (auto& [e, ts] : groups) out.emplace(e, from_terms(std::move(ts)));
    return out;
  }

  /// Largest monomial dividing every term; exponents may be negative and an
  /// atom absent from some term counts as exponent 0 there.
  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_[0].first;
    for (std::size_t i = 1; i < terms_.size(); ++i) g = Monomial::min_exponents(g, terms_[i].first);
    return g;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.constant_value());
    if (b.is_constant()) return a.scaled(b.constant_value());
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.emplace_back(ma * mb, ca * cb);
    return from_terms(std::move(out));
  }

  Poly scaled(const Rational& c) const {
    if (c == 0) return {};
    Poly r = *this;
    Rational k = canonical(c);
    for (auto& t : r.terms_) t.second *= k;
    return r;
  }

  /// Multiplies every term by the monomial m (order of terms may change).
  Poly times(const Monomial& m, const Rational& c = 1) const {
    if (c == 0) return {};
    std::vector<Term> out;
    out.reserve(terms_.size());
    Rational k = canonical(c);
    for (const auto& [tm, tc] : terms_) out.emplace_back(tm * m, tc * k);
    return from_terms(std::move(out));
  }

  Poly pow(unsigned k) const {
    Poly result(1);
    Poly base = *this;
    while (k) {
      if (k & 1U) result = result * base;
      k >>= 1U;
      if (k) base = base * base;
    }
    return result;
  }

  /// Partial derivative with respect to an atom (Laurent exponents allowed).
  Poly partial(Atom a) const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      int e = m.exponent(a);
      if (e == 0) continue;
      out.emplace_back(m.times(a, -1), c * e);
    }
    return from_terms(std::move(out));
  }

  /// Leading term under Monomial::lex.
  const Term& lex_leading() const {
    const Term* best = &terms_.front();
    for (const auto& t : terms_)
      if (Monomial::lex(t.first, best->first) > 0) best = &t;
    return *best;
  }

  /// Exact division. Returns true and sets `quotient` when `divisor` divides
  /// *this with zero remainder; both must have nonnegative exponents.
  bool divide_exact(const Poly& divisor, Poly& quotient, std::size_t max_steps = 10000) const {
    quotient = Poly{};
    Poly rem = *this;
    const auto& [lm, lc] = divisor.lex_leading();
    for (std::size_t step = 0; !rem.is_zero(); ++step) {
      if (step > max_steps) return false;
      const auto& [rm, rc] = rem.lex_leading();
      if (!lm.divides(rm)) return false;
      Monomial qm = rm * lm.inverse();
      Rational qc = rc / lc;
      quotient = quotient + term(qm, qc);
      rem = rem - divisor.times(qm, qc);
    }
    return true;
  }

  friend bool operator==(const Poly&, const Poly&) = default;
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
    return std::lexicographical_compare_three_way(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const Term& x, const Term& y) {
          if (auto c = x.first <=> y.first; c != 0) return c;
          if (x.second < y.second) return std::strong_ordering::less;
          if (y.second < x.second) return std::strong_ordering::greater;
          return std::strong_ordering::equal;
        });
  }

 private:
  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    Poly r;
    r.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->first < i->first) {
        r.terms_.emplace_back(j->first, subtract ? Rational(-j->second) : j->second);
        ++j;
      } else {
        Rational c = subtract ? Rational(i->second - j->second) : Rational(i->second + j->second);
        if (c != 0) r.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

}  // namespace adjflux
