#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include "adjflux/expr.hpp"

namespace adjflux {

/// DSL spelling of an atom: `x`, `u`, `D[u,x,x]`, `f'''`, `D[phi,t,x]`.
inline std::string to_string(Atom a) {
  if (a.index().empty()) return a.name();
  if (a.is_function() && a.args().size() == 1) return a.name() + std::string(a.index().order(), '\'');
  std::string s = "D[" + a.name();
  for (const auto& v : a.index().vars()) s += "," + v;
  return s + "]";
}

namespace detail {

inline void print_monomial_factors(std::ostream& os, const Monomial& m, bool& first_factor) {
  for (const auto& [a, e] : m.factors()) {
    if (e < 0) continue;
    if (!first_factor) os << '*';
    os << to_string(a);
    if (e != 1) os << '^' << e;
    first_factor = false;
  }
}

inline void print_poly(std::ostream& os, const Poly& p) {
  if (p.is_zero()) {
    os << '0';
    return;
  }
  bool first_term = true;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = abs(c);
    if (first_term) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first_term = false;

    bool has_positive = false;
    for (const auto& [a, e] : m.factors()) has_positive |= e > 0;
    bool first_factor = true;
    if (mag != 1 || !has_positive) {
      os << mag.get_str();
      first_factor = false;
    }
    print_monomial_factors(os, m, first_factor);
    for (const auto& [a, e] : m.factors()) {
      if (e > 0) continue;
      os << '/' << to_string(a);
      if (e != -1) os << '^' << -e;
    }
  }
}

}  // namespace detail

/// Deterministic DSL rendering; the output parses back to the same Expr.
inline std::string to_string(const Expr& e) {
  std::ostringstream os;
  if (e.is_polynomial()) {
    detail::print_poly(os, e.numerator());
  } else {
    os << '(';
    detail::print_poly(os, e.numerator());
    os << ")/(";
    detail::print_poly(os, e.denominator());
    os << ')';
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }
inline std::ostream& operator<<(std::ostream& os, Atom a) { return os << to_string(a); }

}  // namespace adjflux
