#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adjflux/generator.hpp"
#include "adjflux/system.hpp"

namespace adjflux {

/// Model-file diagnostic with its class and 1-based position.
class ParseError : public Error {
 public:
  enum class Kind { lexical, syntax, semantic };

  ParseError(Kind kind, int line, int column, const std::string& message, std::vector<std::string> expected = {})
      : Error(format(kind, line, column, message)),
        kind_(kind),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::lexical: return "lexical";
      case Kind::syntax: return "syntax";
      case Kind::semantic: return "semantic";
    }
    return "?";
  }

 private:
  static std::string format(Kind kind, int line, int column, const std::string& message) {
    return std::string(kind_name(kind)) + " error at " + std::to_string(line) + ":" + std::to_string(column) + ": " +
           message;
  }

  Kind kind_;
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

struct SymmetryDecl {
  std::string name;
  Generator generator;
};

/// Parsed model: declarations, equations, constraints, symmetries,
/// substitutions and options, in file order.
struct ModelFile {
  JetSpace space;
  bool adjoints_declared = false;
  std::vector<Equation> equations;
  std::vector<Equation> constraints;
  std::vector<SymmetryDecl> symmetries;
  std::vector<Substitution> substitutions;
  std::vector<std::pair<std::string, std::string>> options;

  DiffSystem system() const { return DiffSystem(space, equations, constraints); }

  const Generator& symmetry(const std::string& name) const {
    for (const auto& s : symmetries)
      if (s.name == name) return s.generator;
    throw Error("no symmetry named '" + name + "'");
  }
  const Substitution& substitution(const std::string& name) const {
    for (const auto& s : substitutions)
      if (s.name() == name) return s;
    throw Error("no substitution named '" + name + "'");
  }
  std::optional<std::string> option(const std::string& name) const {
    for (const auto& [k, v] : options)
      if (k == name) return v;
    return std::nullopt;
  }
};

namespace detail {

inline bool same_equations(const std::vector<Equation>& a, const std::vector<Equation>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !a[i].lhs.identical(b[i].lhs) || a[i].lead != b[i].lead) return false;
  return true;
}

inline bool same_map(const std::map<std::string, Expr>& a, const std::map<std::string, Expr>& b) {
  if (a.size() != b.size()) return false;
  for (auto i = a.begin(), j = b.begin(); i != a.end(); ++i, ++j)
    if (i->first != j->first || !i->second.identical(j->second)) return false;
  return true;
}

}  // namespace detail

inline bool operator==(const ModelFile& a, const ModelFile& b) {
  if (!(a.space == b.space) || !detail::same_equations(a.equations, b.equations) ||
      !detail::same_equations(a.constraints, b.constraints) || a.options != b.options)
    return false;
  if (a.symmetries.size() != b.symmetries.size() || a.substitutions.size() != b.substitutions.size()) return false;
  for (std::size_t i = 0; i < a.symmetries.size(); ++i) {
    const auto& x = a.symmetries[i];
    const auto& y = b.symmetries[i];
    if (x.name != y.name || !detail::same_map(x.generator.xi, y.generator.xi) ||
        !detail::same_map(x.generator.eta, y.generator.eta) ||
        !detail::same_map(x.generator.eta_adjoint, y.generator.eta_adjoint))
      return false;
  }
  for (std::size_t i = 0; i < a.substitutions.size(); ++i)
    if (a.substitutions[i].name() != b.substitutions[i].name() ||
        !detail::same_map(a.substitutions[i].components(), b.substitutions[i].components()))
      return false;
  return true;
}

namespace dsl {

enum class Tok { ident, number, punct, prime, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"independents", "dependents", "adjoints",     "arbitrary", "equation",
                                       "constraint",   "symmetry",   "substitution", "option",    "lead"};
  return k;
}

inline std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line;
    int cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::ident, text.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          j = k;
        }
      }
      out.push_back({Tok::number, text.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      out.push_back({Tok::prime, "'", l, cl});
      advance(1);
      continue;
    }
    if (std::string("+-*/^()[]{},;:=").find(c) != std::string::npos) {
      out.push_back({Tok::punct, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(ParseError::Kind::lexical, l, cl, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

/// Exact value of a numeric literal such as 12, 0.25 or 1e-9.
inline Rational number_value(const std::string& text) {
  auto e = text.find_first_of("eE");
  Rational mantissa = parse_rational(text.substr(0, e));
  if (e == std::string::npos) return mantissa;
  long exponent = std::stol(text.substr(e + 1));
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational scale(p);
  Rational r = exponent < 0 ? Rational(mantissa / scale) : Rational(mantissa * scale);
  r.canonicalize();
  return r;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ModelFile parse_model() {
    while (!at_end()) statement();
    finish_space();
    if (space_->independents().empty()) semantic_error(peek(), "no independent variables declared");
    if (space_->dependents().empty()) semantic_error(peek(), "no dependent variables declared");
    if (equations_.size() != space_->m())
      semantic_error(peek(), std::to_string(equations_.size()) + " equation(s) for " + std::to_string(space_->m()) +
                                 " dependent variable(s)");
    ModelFile m;
    m.space = *space_;
    m.adjoints_declared = !adjoints_.empty();
    m.equations = std::move(equations_);
    m.constraints = std::move(constraints_);
    m.symmetries = std::move(symmetries_);
    m.substitutions = std::move(substitutions_);
    m.options = std::move(options_);
    auto mo = m.option("max_order");
    m.space = m.space.with_max_order(mo ? std::stoi(*mo) : kDefaultMaxOrder);
    return m;
  }

  /// A lone expression over an existing jet space.
  Expr parse_expression_only(const JetSpace& space) {
    space_ = space;
    Expr e = expr();
    if (!at_end()) syntax_error({"operator", "end of input"});
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::end; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_punct(const std::string& p) const { return peek().kind == Tok::punct && peek().text == p; }
  bool is_keyword(const std::string& k) const { return peek().kind == Tok::ident && peek().text == k; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return "end of input";
      case Tok::number: return "number '" + t.text + "'";
      case Tok::ident: return "'" + t.text + "'";
      default: return "'" + t.text + "'";
    }
  }

  [[noreturn]] void syntax_error(std::vector<std::string> expected) const {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + describe(peek());
    throw ParseError(ParseError::Kind::syntax, peek().line, peek().column, msg, std::move(expected));
  }
  [[noreturn]] static void semantic_error(const Token& at, const std::string& msg) {
    throw ParseError(ParseError::Kind::semantic, at.line, at.column, msg);
  }

  void expect_punct(const std::string& p) {
    if (!is_punct(p)) syntax_error({"'" + p + "'"});
    next();
  }
  Token expect_ident(const std::string& what = "identifier") {
    if (peek().kind != Tok::ident || keywords().count(peek().text)) syntax_error({what});
    return next();
  }

  void statement() {
    const Token& t = peek();
    static const std::vector<std::string> starts{"independents", "dependents",   "adjoints", "arbitrary", "equation",
                                                 "constraint",   "symmetry",     "substitution", "option"};
    if (t.kind != Tok::ident) syntax_error(starts);
    if (t.text == "independents" || t.text == "dependents" || t.text == "adjoints") {
      declaration(t.text);
    } else if (t.text == "arbitrary") {
      arbitrary();
    } else if (t.text == "equation" || t.text == "constraint") {
      equation(t.text == "constraint");
    } else if (t.text == "symmetry") {
      symmetry();
    } else if (t.text == "substitution") {
      substitution();
    } else if (t.text == "option") {
      option();
    } else {
      syntax_error(starts);
    }
  }

  void require_declaration_phase(const Token& t) {
    if (space_) semantic_error(t, "declarations must precede equations, symmetries and substitutions");
  }

  void declare(const Token& name) {
    if (!declared_.insert(name.text).second) semantic_error(name, "duplicate symbol '" + name.text + "'");
  }

  void declaration(const std::string& kind) {
    Token kw = next();
    require_declaration_phase(kw);
    auto& target = kind == "independents" ? independents_ : kind == "dependents" ? dependents_ : adjoints_;
    if (peek().kind != Tok::ident || keywords().count(peek().text)) syntax_error({"identifier"});
    while (peek().kind == Tok::ident && !keywords().count(peek().text)) {
      Token n = next();
      declare(n);
      target.push_back(n.text);
      if (is_punct(",")) next();
    }
  }

  void arbitrary() {
    Token kw = next();
    require_declaration_phase(kw);
    do {
      Token name = expect_ident("function name");
      declare(name);
      expect_punct("(");
      FunctionFamily fam{name.text, {}};
      do {
        Token arg = expect_ident("independent variable");
        if (std::find(independents_.begin(), independents_.end(), arg.text) == independents_.end())
          semantic_error(arg, "unknown independent variable '" + arg.text + "'");
        fam.args.push_back(arg.text);
      } while (is_punct(",") && (next(), true));
      expect_punct(")");
      functions_.push_back(std::move(fam));
    } while (is_punct(",") && (next(), true));
  }

  void finish_space() {
    if (space_) return;
    try {
      space_ = JetSpace(independents_, dependents_, adjoints_, functions_, 64);
    } catch (const Error& e) {
      semantic_error(peek(), e.what());
    }
    if (!adjoints_.empty() && adjoints_.size() != dependents_.size())
      semantic_error(peek(), "one adjoint name is needed per dependent variable");
  }

  void equation(bool constraint) {
    Token kw = next();
    finish_space();
    Token name = expect_ident("equation name");
    for (const auto& e : equations_)
      if (e.name == name.text) semantic_error(name, "duplicate equation '" + name.text + "'");
    for (const auto& e : constraints_)
      if (e.name == name.text) semantic_error(name, "duplicate equation '" + name.text + "'");
    expect_punct(":");
    Expr lhs = expr();
    expect_punct("=");
    Expr rhs = expr();
    std::optional<Atom> lead;
    if (is_keyword("lead")) {
      next();
      Token at = peek();
      Expr l = power();
      if (!l.is_atom() || (!l.as_atom().is_jet() && !l.as_atom().is_function()))
        semantic_error(at, "lead must be a derivative coordinate such as D[u,t]");
      lead = l.as_atom();
    }
    Expr f = lhs - rhs;
    if (f.is_zero()) semantic_error(kw, "equation '" + name.text + "' is identically zero");
    for (Atom a : f.atoms()) {
      if (space_->is_v_atom(a)) semantic_error(name, "equation '" + name.text + "' uses adjoint variable '" + a.name() + "'");
      if (constraint && a.is_jet())
        semantic_error(name, "constraint '" + name.text + "' may only involve arbitrary functions and independents");
    }
    if (lead && !f.contains(*lead)) semantic_error(name, "equation '" + name.text + "' does not contain its lead");
    (constraint ? constraints_ : equations_).push_back(Equation{name.text, f, lead});
  }

  void symmetry() {
    next();
    finish_space();
    Token name = expect_ident("symmetry name");
    for (const auto& s : symmetries_)
      if (s.name == name.text) semantic_error(name, "duplicate symmetry '" + name.text + "'");
    SymmetryDecl decl{name.text, {}};
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind != Tok::ident || (peek().text != "xi" && peek().text != "eta")) syntax_error({"'xi'", "'eta'", "'}'"});
      Token head = next();
      expect_punct("[");
      Token var = expect_ident("variable name");
      expect_punct("]");
      expect_punct("=");
      Expr value = expr();
      expect_punct(";");
      std::map<std::string, Expr>* target = nullptr;
      std::string key = var.text;
      if (head.text == "xi") {
        if (!space_->is_independent(var.text)) semantic_error(var, "unknown independent variable '" + var.text + "'");
        target = &decl.generator.xi;
      } else if (space_->is_dependent(var.text)) {
        target = &decl.generator.eta;
      } else if (space_->is_adjoint(var.text)) {
        target = &decl.generator.eta_adjoint;
        key = space_->dependent_of(var.text);
      } else {
        semantic_error(var, "unknown dependent variable '" + var.text + "'");
      }
      if (target->count(key)) semantic_error(var, "duplicate coefficient for '" + var.text + "'");
      (*target)[key] = value;
    }
    next();
    symmetries_.push_back(std::move(decl));
  }

  void substitution() {
    next();
    finish_space();
    Token name = expect_ident("substitution name");
    for (const auto& s : substitutions_)
      if (s.name() == name.text) semantic_error(name, "duplicate substitution '" + name.text + "'");
    std::map<std::string, Expr> comps;
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind != Tok::ident) syntax_error({"adjoint name", "'}'"});
      Token head = next();
      expect_punct("[");
      Token dep = expect_ident("dependent variable");
      expect_punct("]");
      expect_punct("=");
      Expr value = expr();
      expect_punct(";");
      if (!space_->is_dependent(dep.text)) semantic_error(dep, "unknown dependent variable '" + dep.text + "'");
      if (head.text != "v" && head.text != space_->adjoint_of(dep.text))
        semantic_error(head, "'" + head.text + "' is not the adjoint of '" + dep.text + "'");
      if (comps.count(dep.text)) semantic_error(dep, "duplicate component for '" + dep.text + "'");
      comps[dep.text] = value;
    }
    next();
    substitutions_.emplace_back(name.text, std::move(comps));
  }

  void option() {
    next();
    Token name = expect_ident("option name");
    static const std::set<std::string> known{"seed", "tol", "max_order"};
    if (!known.count(name.text)) semantic_error(name, "unknown option '" + name.text + "'");
    if (is_punct("=")) next();
    if (peek().kind != Tok::number) syntax_error({"number"});
    Token value = next();
    if (name.text != "tol" && value.text.find_first_not_of("0123456789") != std::string::npos)
      semantic_error(value, "option '" + name.text + "' needs a non-negative integer");
    for (const auto& [k, v] : options_)
      if (k == name.text) semantic_error(name, "duplicate option '" + name.text + "'");
    options_.emplace_back(name.text, value.text);
  }

  // expr := term (('+'|'-') term)*
  Expr expr() {
    Expr e = term();
    while (is_punct("+") || is_punct("-")) {
      bool minus = next().text == "-";
      Expr t = term();
      e = minus ? e - t : e + t;
    }
    return e;
  }

  // term := unary (('*'|'/') unary)*
  Expr term() {
    Expr e = unary();
    while (is_punct("*") || is_punct("/")) {
      Token op = next();
      Expr f = unary();
      if (op.text == "*") {
        e *= f;
      } else {
        if (f.is_zero()) semantic_error(op, "zero denominator");
        e /= f;
      }
    }
    return e;
  }

  Expr unary() {
    if (is_punct("-")) {
      next();
      return -unary();
    }
    if (is_punct("+")) {
      next();
      return unary();
    }
    return power();
  }

  // power := primary ['^' unary], right-associative with integer exponents
  Expr power() {
    Expr base = primary();
    if (!is_punct("^")) return base;
    Token op = next();
    Token at = peek();
    Expr ex = unary();
    if (!ex.is_constant() || !is_integer(ex.constant_value()))
      semantic_error(at, "exponent must be an integer constant");
    Rational k = ex.constant_value();
    if (abs(k) > 1000) semantic_error(at, "exponent too large");
    long n = k.get_num().get_si();
    if (n < 0 && base.is_zero()) semantic_error(op, "zero denominator");
    return base.pow(static_cast<int>(n));
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      next();
      return Expr(number_value(t.text));
    }
    if (is_punct("(")) {
      next();
      Expr e = expr();
      expect_punct(")");
      return e;
    }
    if (t.kind == Tok::ident && t.text == "D" && peek(1).kind == Tok::punct && peek(1).text == "[") return derivative();
    if (t.kind == Tok::ident && !keywords().count(t.text)) {
      Token name = next();
      Expr e = symbol(name);
      int primes = 0;
      Token first_prime = peek();
      while (peek().kind == Tok::prime) {
        next();
        ++primes;
      }
      if (primes > 0) {
        const auto* fam = space_->function(name.text);
        if (!fam || fam->args.size() != 1)
          semantic_error(first_prime, "primes apply only to functions of one variable ('" + name.text + "')");
        MultiIndex idx;
        for (int k = 0; k < primes; ++k) idx = idx.plus(fam->args[0]);
        return Expr(space_->f(name.text, idx));
      }
      return e;
    }
    syntax_error({"number", "identifier", "'('", "'-'", "'D['"});
  }

  Expr symbol(const Token& name) {
    const auto& s = *space_;
    if (s.is_independent(name.text)) return Expr(Atom::independent(name.text));
    if (s.is_dependent(name.text) || s.is_adjoint(name.text)) return Expr(Atom::jet(name.text, {}));
    if (s.function(name.text)) return Expr(s.f(name.text));
    semantic_error(name, "unknown identifier '" + name.text + "'");
  }

  Expr derivative() {
    next();
    expect_punct("[");
    Expr e = expr();
    if (!is_punct(",")) syntax_error({"','"});
    std::vector<Token> vars;
    while (is_punct(",")) {
      next();
      vars.push_back(expect_ident("independent variable"));
    }
    expect_punct("]");
    for (const auto& v : vars) {
      if (!space_->is_independent(v.text)) semantic_error(v, "unknown independent variable '" + v.text + "'");
      e = total_derivative(e, v.text, *space_);
    }
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> declared_;
  std::vector<std::string> independents_;
  std::vector<std::string> dependents_;
  std::vector<std::string> adjoints_;
  std::vector<FunctionFamily> functions_;
  std::optional<JetSpace> space_;
  std::vector<Equation> equations_;
  std::vector<Equation> constraints_;
  std::vector<SymmetryDecl> symmetries_;
  std::vector<Substitution> substitutions_;
  std::vector<std::pair<std::string, std::string>> options_;
};

}  // namespace dsl

inline ModelFile parse_model(const std::string& text) { return dsl::Parser(text).parse_model(); }

/// Parses an expression over the variables of `space`.
inline Expr parse_expr(const std::string& text, const JetSpace& space) {
  return dsl::Parser(text).parse_expression_only(space.with_max_order(std::max(space.max_order(), 64)));
}

/// Canonical DSL text of a model; parse_model(print_model(m)) == m.
inline std::string print_model(const ModelFile& m) {
  std::ostringstream os;
  auto list = [&](const char* kw, const std::vector<std::string>& names) {
    if (names.empty()) return;
    os << kw;
    for (const auto& n : names) os << ' ' << n;
    os << '\n';
  };
  list("independents", m.space.independents());
  list("dependents", m.space.dependents());
  if (m.adjoints_declared) list("adjoints", m.space.adjoints());
  for (const auto& f : m.space.functions()) {
    os << "arbitrary " << f.name << '(';
    for (std::size_t i = 0; i < f.args.size(); ++i) os << (i ? "," : "") << f.args[i];
    os << ")\n";
  }
  auto eqs = [&](const char* kw, const std::vector<Equation>& list) {
    for (const auto& e : list) {
      os << kw << ' ' << e.name << ": " << to_string(e.lhs) << " = 0";
      if (e.lead) os << " lead " << to_string(*e.lead);
      os << '\n';
    }
  };
  eqs("equation", m.equations);
  eqs("constraint", m.constraints);
  for (const auto& s : m.symmetries) {
    os << "symmetry " << s.name << " {\n";
    auto coeffs = [&](const char* head, const std::map<std::string, Expr>& c, const std::vector<std::string>& order,
                      bool adjoint) {
      for (const auto& k : order) {
        auto it = c.find(k);
        if (it == c.end()) continue;
        os << "  " << head << '[' << (adjoint ? m.space.adjoint_of(k) : k) << "] = " << to_string(it->second) << ";\n";
      }
    };
    coeffs("xi", s.generator.xi, m.space.independents(), false);
    coeffs("eta", s.generator.eta, m.space.dependents(), false);
    coeffs("eta", s.generator.eta_adjoint, m.space.dependents(), true);
    os << "}\n";
  }
  for (const auto& s : m.substitutions) {
    os << "substitution " << s.name() << " {\n";
    for (const auto& k : m.space.dependents())
      if (s.components().count(k))
        os << "  " << m.space.adjoint_of(k) << '[' << k << "] = " << to_string(s.component(k)) << ";\n";
    os << "}\n";
  }
  for (const auto& [k, v] : m.options) os << "option " << k << ' ' << v << '\n';
  return os.str();
}

}  // namespace adjflux
