#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "adjflux/expr.hpp"

namespace adjflux {

/// Raw, unnormalized expression tree. Parsers and generators build these;
/// normalize() turns one into a canonical Expr and to_tree() gives the
/// canonical tree of an Expr back.
class Tree {
 public:
  enum class Kind { constant, symbol, sum, product, power, quotient };

  static Tree constant(Rational c) { return Tree(Node{Kind::constant, std::move(c), std::nullopt, 0, {}}); }
  static Tree symbol(Atom a) { return Tree(Node{Kind::symbol, 0, a, 0, {}}); }
  static Tree sum(std::vector<Tree> terms) { return Tree(Node{Kind::sum, 0, std::nullopt, 0, std::move(terms)}); }
  static Tree product(std::vector<Tree> factors) {
    return Tree(Node{Kind::product, 0, std::nullopt, 0, std::move(factors)});
  }
  static Tree power(Tree base, int exponent) {
    return Tree(Node{Kind::power, 0, std::nullopt, exponent, {std::move(base)}});
  }
  static Tree quotient(Tree num, Tree den) {
    return Tree(Node{Kind::quotient, 0, std::nullopt, 0, {std::move(num), std::move(den)}});
  }

  Kind kind() const { return node_->kind; }
  const Rational& value() const { return node_->value; }
  Atom atom() const { return *node_->atom; }
  int exponent() const { return node_->exponent; }
  const std::vector<Tree>& children() const { return node_->children; }

 private:
  struct Node {
    Kind kind;
    Rational value;
    std::optional<Atom> atom;
    int exponent;
    std::vector<Tree> children;
  };
  explicit Tree(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

/// Canonical form of a raw tree. Throws MathError("zero denominator") when a
/// quotient's denominator normalizes to 0.
inline Expr normalize(const Tree& t) {
  switch (t.kind()) {
    case Tree::Kind::constant:
      return Expr(t.value());
    case Tree::Kind::symbol:
      return Expr(t.atom());
    case Tree::Kind::sum: {
      Expr acc;
      for (const auto& c : t.children()) acc += normalize(c);
      return acc;
    }
    case Tree::Kind::product: {
      Expr acc(1);
      for (const auto& c : t.children()) acc *= normalize(c);
      return acc;
    }
    case Tree::Kind::power:
      return normalize(t.children()[0]).pow(t.exponent());
    case Tree::Kind::quotient:
      return normalize(t.children()[0]) / normalize(t.children()[1]);
  }
  return Expr();
}

namespace detail {

inline Tree poly_tree(const Poly& p) {
  std::vector<Tree> terms;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Tree> factors;
    if (c != 1 || m.is_one()) factors.push_back(Tree::constant(c));
    for (const auto& [a, e] : m.factors())
      factors.push_back(e == 1 ? Tree::symbol(a) : Tree::power(Tree::symbol(a), e));
    terms.push_back(factors.size() == 1 ? factors[0] : Tree::product(std::move(factors)));
  }
  if (terms.empty()) return Tree::constant(0);
  return terms.size() == 1 ? terms[0] : Tree::sum(std::move(terms));
}

}  // namespace detail

/// Canonical tree of a normalized expression: x^0 and x^1 never appear,
/// sums/products are flat and ordered, and a quotient node appears only at
/// the top when the denominator is not a monomial.
inline Tree to_tree(const Expr& e) {
  if (e.is_polynomial()) return detail::poly_tree(e.numerator());
  return Tree::quotient(detail::poly_tree(e.numerator()), detail::poly_tree(e.denominator()));
}

}  // namespace adjflux
