#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "adjflux/error.hpp"

namespace adjflux {

/// Multiset of independent-variable names, stored sorted.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<std::string> vars) : vars_(vars) { std::sort(vars_.begin(), vars_.end()); }
  explicit MultiIndex(std::vector<std::string> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
  }

  const std::vector<std::string>& vars() const { return vars_; }
  int order() const { return static_cast<int>(vars_.size()); }
  bool empty() const { return vars_.empty(); }

  int count(const std::string& var) const {
    return static_cast<int>(std::count(vars_.begin(), vars_.end(), var));
  }

  MultiIndex plus(const std::string& var) const {
    MultiIndex r = *this;
    r.vars_.insert(std::upper_bound(r.vars_.begin(), r.vars_.end(), var), var);
    return r;
  }

  MultiIndex plus(const MultiIndex& other) const {
    std::vector<std::string> merged;
    merged.reserve(vars_.size() + other.vars_.size());
    std::merge(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(), std::back_inserter(merged));
    MultiIndex r;
    r.vars_ = std::move(merged);
    return r;
  }

  /// Removes one occurrence of `var`; the caller guarantees it is present.
  MultiIndex minus(const std::string& var) const {
    MultiIndex r = *this;
    auto it = std::lower_bound(r.vars_.begin(), r.vars_.end(), var);
    if (it == r.vars_.end() || *it != var) throw Error("multi-index does not contain '" + var + "'");
    r.vars_.erase(it);
    return r;
  }

  bool contains(const MultiIndex& sub) const {
    return std::includes(vars_.begin(), vars_.end(), sub.vars_.begin(), sub.vars_.end());
  }

  /// Multiset difference; requires contains(sub).
  MultiIndex minus(const MultiIndex& sub) const {
    std::vector<std::string> out;
    std::set_difference(vars_.begin(), vars_.end(), sub.vars_.begin(), sub.vars_.end(), std::back_inserter(out));
    MultiIndex r;
    r.vars_ = std::move(out);
    return r;
  }

  /// Number of distinct orderings of the index: s! / prod(count_k!).
  std::uint64_t permutations() const {
    std::uint64_t r = 1;
    std::size_t run = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      r *= (i + 1);
      run = (i > 0 && vars_[i] == vars_[i - 1]) ? run + 1 : 1;
      r /= run;
    }
    return r;
  }

  /// All sub-multisets, each exactly once (including empty and *this).
  std::vector<MultiIndex> submultisets() const {
    std::vector<std::pair<std::string, int>> groups;
    for (const auto& v : vars_) {
      if (!groups.empty() && groups.back().first == v)
        ++groups.back().second;
      else
        groups.emplace_back(v, 1);
    }
    std::vector<MultiIndex> out{MultiIndex{}};
    for (const auto& [name, n] : groups) {
      std::vector<MultiIndex> next;
      for (const auto& base : out) {
        MultiIndex cur = base;
        next.push_back(cur);
        for (int k = 1; k <= n; ++k) {
          cur = cur.plus(name);
          next.push_back(cur);
        }
      }
      out = std::move(next);
    }
    return out;
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::string> vars_;
};

enum class AtomKind : std::uint8_t { independent = 0, function = 1, jet = 2 };

namespace detail {

struct AtomData {
  AtomKind kind;
  std::string name;
  MultiIndex index;
  std::vector<std::string> args;  // function atoms only

  auto key() const { return std::tie(kind, name, index, args); }
  friend bool operator<(const AtomData& a, const AtomData& b) { return a.key() < b.key(); }
};

class AtomRegistry {
 public:
  static const AtomData* intern(AtomData data) {
    static AtomRegistry registry;
    std::lock_guard lock(registry.mu_);
    return &*registry.atoms_.insert(std::move(data)).first;
  }

 private:
  std::mutex mu_;
  std::set<AtomData> atoms_;
};

}  // namespace detail

/// Interned symbolic atom: an independent variable, a jet coordinate u_J, or
/// an arbitrary function f_J of some independents. Copying is free and
/// equality is pointer identity; ordering is lexicographic on
/// (kind, name, multi-index).
class Atom {
 public:
  static Atom independent(std::string name) {
    return Atom(detail::AtomRegistry::intern({AtomKind::independent, std::move(name), {}, {}}));
  }
  static Atom jet(std::string dependent, MultiIndex index = {}) {
    return Atom(detail::AtomRegistry::intern({AtomKind::jet, std::move(dependent), std::move(index), {}}));
  }
  static Atom function(std::string name, std::vector<std::string> args, MultiIndex index = {}) {
    return Atom(
        detail::AtomRegistry::intern({AtomKind::function, std::move(name), std::move(index), std::move(args)}));
  }

  AtomKind kind() const { return data_->kind; }
  const std::string& name() const { return data_->name; }
  const MultiIndex& index() const { return data_->index; }
  const std::vector<std::string>& args() const { return data_->args; }
  int order() const { return data_->index.order(); }

  bool is_independent() const { return kind() == AtomKind::independent; }
  bool is_jet() const { return kind() == AtomKind::jet; }
  bool is_function() const { return kind() == AtomKind::function; }

  bool depends_on_arg(const std::string& var) const {
    return std::find(args().begin(), args().end(), var) != args().end();
  }

  /// Same base symbol carrying `index` as its derivative multi-index.
  Atom with_index(MultiIndex index) const {
    return Atom(detail::AtomRegistry::intern({kind(), name(), std::move(index), args()}));
  }
  Atom differentiated(const std::string& var) const { return with_index(index().plus(var)); }
  Atom base() const { return with_index({}); }

  const void* id() const { return data_; }

  friend bool operator==(Atom a, Atom b) { return a.data_ == b.data_; }
  friend std::strong_ordering operator<=>(Atom a, Atom b) {
    if (a.data_ == b.data_) return std::strong_ordering::equal;
    return a.data_->key() < b.data_->key() ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  explicit Atom(const detail::AtomData* data) : data_(data) {}
  const detail::AtomData* data_;
};

}  // namespace adjflux

template <>
struct std::hash<adjflux::Atom> {
  std::size_t operator()(adjflux::Atom a) const noexcept { return std::hash<const void*>{}(a.id()); }
};
