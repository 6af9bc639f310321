#pragma once

#include <vector>

#include "adjflux/generator.hpp"
#include "adjflux/manifold.hpp"

namespace adjflux {

struct SymmetryReport {
  bool ok = true;
  std::vector<Expr> residuals;  // reduced pr X(F_a), one per equation
};

/// Applies the prolonged generator to every equation and reduces the result
/// modulo the solution manifold.
inline SymmetryReport check_symmetry(const DiffSystem& sys, const Generator& X, const Ranking& ranking) {
  SymmetryReport report;
  for (const auto& eq : sys.equations()) {
    Expr r = ranking.reduce(apply_prolonged(X, eq.lhs, sys.space())).normal_form;
    if (!r.is_zero()) report.ok = false;
    report.residuals.push_back(r);
  }
  return report;
}

inline SymmetryReport check_symmetry(const DiffSystem& sys, const Generator& X) {
  return check_symmetry(sys, X, Ranking(sys));
}

}  // namespace adjflux
