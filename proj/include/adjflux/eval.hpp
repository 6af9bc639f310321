#pragma once

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "adjflux/expr.hpp"
#include "adjflux/print.hpp"

namespace adjflux {

/// Values of atoms at a numeric point.
using Point = std::unordered_map<Atom, double>;

/// Realizes single-argument arbitrary-function families as explicit
/// polynomials c0 + c1*s + ... so every derivative order has a value.
class FuncRealization {
 public:
  FuncRealization() = default;

  void set(const std::string& name, std::vector<double> coefficients) { polys_[name] = std::move(coefficients); }
  bool has(const std::string& name) const { return polys_.count(name) != 0; }
  const std::vector<double>& coefficients(const std::string& name) const { return polys_.at(name); }

  /// Random degree-`degree` polynomials with coefficients uniform in [-1, 1].
  template <class Rng>
  static FuncRealization random(const std::vector<std::string>& names, Rng& rng, int degree = 5) {
    FuncRealization r;
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (const auto& n : names) {
      std::vector<double> c(static_cast<std::size_t>(degree) + 1);
      for (auto& x : c) x = coef(rng);
      r.set(n, std::move(c));
    }
    return r;
  }

  /// k-th derivative of the realization of `name` at s.
  double value(const std::string& name, int k, double s) const {
    const auto& c = polys_.at(name);
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(k);) {
      double falling = 1.0;
      for (int j = 0; j < k; ++j) falling *= static_cast<double>(i - static_cast<std::size_t>(j));
      acc = acc * s + c[i] * falling;
    }
    return acc;
  }

 private:
  std::map<std::string, std::vector<double>> polys_;
};

namespace detail {

inline constexpr double kSingularity = 1e-12;

inline double atom_value(Atom a, const Point& point, const FuncRealization& funcs, std::set<std::string>& missing) {
  if (auto it = point.find(a); it != point.end()) return it->second;
  if (a.is_function() && a.args().size() == 1 && funcs.has(a.name())) {
    Atom arg = Atom::independent(a.args()[0]);
    auto it = point.find(arg);
    if (it == point.end()) {
      missing.insert(to_string(arg));
      return 0.0;
    }
    return funcs.value(a.name(), a.order(), it->second);
  }
  missing.insert(to_string(a));
  return 0.0;
}

inline double eval_poly(const Poly& p, const Point& point, const FuncRealization& funcs,
                        std::set<std::string>& missing) {
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double term = c.get_d();
    for (const auto& [a, e] : m.factors()) {
      double v = atom_value(a, point, funcs, missing);
      if (e < 0 && missing.empty() && std::abs(v) < kSingularity) throw EvalError("numeric singularity");
      term *= std::pow(v, e);
    }
    sum += term;
  }
  return sum;
}

}  // namespace detail

/// IEEE double value of `e` at `point`. Throws EvalError listing every
/// unassigned atom, or "numeric singularity" for a divisor below 1e-12.
inline double eval_numeric(const Expr& e, const Point& point, const FuncRealization& funcs = {}) {
  std::set<std::string> missing;
  double num = detail::eval_poly(e.numerator(), point, funcs, missing);
  double den = e.is_polynomial() ? 1.0 : detail::eval_poly(e.denominator(), point, funcs, missing);
  if (!missing.empty()) {
    std::string msg = "unassigned symbols:";
    for (const auto& m : missing) msg += " " + m;
    throw EvalError(msg);
  }
  if (std::abs(den) < detail::kSingularity) throw EvalError("numeric singularity");
  return num / den;
}

}  // namespace adjflux
