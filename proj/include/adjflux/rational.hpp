#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "adjflux/error.hpp"

namespace adjflux {

/// Arbitrary-precision exact rational. All symbolic coefficients use it.
using Rational = mpq_class;

/// Lowest terms; mpq_class(num, den) does not reduce on its own.
inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw MathError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "12", "-3/4" or a finite decimal such as "0.25" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw Error("invalid rational literal '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw MathError("zero denominator");
    return q;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+") throw Error("invalid decimal literal '" + s + "'");
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace adjflux
