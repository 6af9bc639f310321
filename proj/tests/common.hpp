#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adjflux/adjflux.hpp"

namespace adjflux::testing {

inline std::string model_path(const std::string& name) { return std::string(ADJFLUX_MODELS_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ModelFile load(const std::string& name) { return parse_model(read_file(model_path(name))); }

/// Parses an expression in the variables of a model.
inline Expr ex(const ModelFile& m, const std::string& text) { return parse_expr(text, m.space); }

/// Random raw trees over a fixed atom pool.
class TreeGen {
 public:
  TreeGen(std::vector<Atom> pool, std::uint64_t seed) : pool_(std::move(pool)), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  Tree constant() {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    return Tree::constant(Rational(num(rng_), den(rng_)));
  }

  Tree leaf() {
    std::uniform_int_distribution<std::size_t> pick(0, pool_.size());
    std::size_t k = pick(rng_);
    return k == pool_.size() ? constant() : Tree::symbol(pool_[k]);
  }

  /// Polynomial trees (no quotients, non-negative powers).
  Tree polynomial(int depth) {
    if (depth <= 0) return leaf();
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> width(2, 3);
    switch (kind(rng_)) {
      case 0:
      case 1: {
        std::vector<Tree> c;
        for (int i = width(rng_); i > 0; --i) c.push_back(polynomial(depth - 1));
        return Tree::sum(std::move(c));
      }
      case 2:
      case 3: {
        std::vector<Tree> c;
        for (int i = 2; i > 0; --i) c.push_back(polynomial(depth - 1));
        return Tree::product(std::move(c));
      }
      case 4:
        return Tree::power(polynomial(depth - 2), 2);
      default:
        return leaf();
    }
  }

  /// Random re-association and permutation of the same tree.
  Tree shuffle(const Tree& t) {
    switch (t.kind()) {
      case Tree::Kind::sum:
      case Tree::Kind::product: {
        std::vector<Tree> c;
        for (const auto& ch : t.children()) c.push_back(shuffle(ch));
        std::shuffle(c.begin(), c.end(), rng_);
        // Regroup the first two children as a nested node.
        if (c.size() > 2 && std::bernoulli_distribution(0.5)(rng_)) {
          std::vector<Tree> inner{c[0], c[1]};
          Tree nested = t.kind() == Tree::Kind::sum ? Tree::sum(std::move(inner)) : Tree::product(std::move(inner));
          c.erase(c.begin(), c.begin() + 2);
          c.push_back(nested);
        }
        return t.kind() == Tree::Kind::sum ? Tree::sum(std::move(c)) : Tree::product(std::move(c));
      }
      case Tree::Kind::power:
        return Tree::power(shuffle(t.children()[0]), t.exponent());
      case Tree::Kind::quotient:
        return Tree::quotient(shuffle(t.children()[0]), shuffle(t.children()[1]));
      default:
        return t;
    }
  }

  /// Random polynomial Expr with at most `terms` terms of degree <= 3.
  Expr small_poly(int terms) {
    std::uniform_int_distribution<int> count(1, terms);
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
    std::uniform_int_distribution<int> coef(-4, 4);
    Expr e;
    for (int i = count(rng_); i > 0; --i) {
      Expr t(coef(rng_));
      for (int d = deg(rng_); d > 0; --d) t *= Expr(pool_[pick(rng_)]);
      e += t;
    }
    return e;
  }

 private:
  std::vector<Atom> pool_;
  std::mt19937_64 rng_;
};

/// u, its derivatives up to `order` in the given independents, and the
/// independents themselves.
inline std::vector<Atom> jet_pool(const JetSpace& s, int order) {
  std::vector<Atom> pool;
  for (const auto& x : s.independents()) pool.push_back(s.x(x));
  for (const auto& u : s.dependents())
    for (const auto& idx : multi_indices(s, 0, order)) pool.push_back(s.u(u, idx));
  return pool;
}

}  // namespace adjflux::testing
