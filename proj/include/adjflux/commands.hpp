#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "adjflux/adjoint.hpp"
#include "adjflux/conslaw.hpp"
#include "adjflux/dsl.hpp"
#include "adjflux/symmetry.hpp"

namespace adjflux {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMath = 1;
inline constexpr int kExitUsage = 2;

/// Parsed command line of one subcommand.
struct CommandOptions {
  enum class Command { adjoint, selfadjoint_check, selfadjoint_find, multiplier, conslaw, reduce };
  Command command = Command::adjoint;
  std::string model_path;
  std::string sub;
  std::string sym;
  std::string ansatz;
  std::string expr;
  bool strip = false;
  bool verify = false;
  bool unchecked = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_order;
};

namespace detail {

inline std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw Error("invalid seed '" + text + "' from " + source);
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw Error("invalid seed '" + text + "' from " + source);
  }
}

/// --seed, then ADJFLUX_SEED, then the model option, then the default.
inline std::uint64_t resolve_seed(const CommandOptions& opt, const ModelFile& model) {
  if (opt.seed) return *opt.seed;
  if (const char* env = std::getenv("ADJFLUX_SEED"); env && *env) return parse_seed(env, "ADJFLUX_SEED");
  if (auto s = model.option("seed")) return parse_seed(*s, "option seed");
  return kDefaultSeed;
}

inline double resolve_tolerance(const CommandOptions& opt, const ModelFile& model) {
  if (opt.tol) return *opt.tol;
  if (auto s = model.option("tol")) return std::stod(*s);
  return kDefaultTolerance;
}

inline ModelFile load_model(const CommandOptions& opt) {
  std::ifstream in(opt.model_path);
  if (!in) throw Error("cannot open model file '" + opt.model_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  ModelFile model = parse_model(buf.str());
  if (opt.max_order) {
    if (*opt.max_order < 1) throw Error("--max-order must be positive");
    model.space = model.space.with_max_order(*opt.max_order);
  }
  return model;
}

inline std::string substitution_lines(const Substitution& s, const JetSpace& space) {
  std::string out;
  for (const auto& dep : space.dependents())
    if (s.components().count(dep))
      out += "  " + space.adjoint_of(dep) + "[" + dep + "] = " + to_string(s.component(dep)) + "\n";
  return out;
}

inline void print_certificate(std::ostream& out, const Certificate& cert, const Ranking& ranking,
                              const std::string& indent = "  ") {
  if (cert.empty()) out << indent << "(none)\n";
  for (const auto& [k, c] : cert) out << indent << certificate_label(k, ranking) << ": " << to_string(c) << "\n";
}

inline int cmd_adjoint(const ModelFile& model, std::ostream& out) {
  DiffSystem sys = model.system();
  out << "formal Lagrangian:\n  L = " << to_string(formal_lagrangian(sys)) << "\n";
  out << "adjoint system:\n";
  for (const auto& eq : adjoint_system(sys).equations) out << "  " << eq.name << ": " << to_string(eq.lhs) << " = 0\n";
  return kExitOk;
}

inline void print_report(std::ostream& out, const DiffSystem& sys, const Ranking& ranking,
                         const SelfAdjointnessReport& report) {
  auto adj = adjoint_system(sys);
  out << "verdict: " << (report.verdict ? "yes" : "no") << "\n";
  out << "lambda:\n";
  for (std::size_t a = 0; a < sys.m(); ++a)
    for (std::size_t b = 0; b < sys.m(); ++b)
      out << "  lambda[" << adj.equations[a].name << "][" << sys.equations()[b].name
          << "] = " << to_string(report.lambda[a][b]) << "\n";
  bool extras = false;
  for (std::size_t a = 0; a < sys.m(); ++a) {
    for (const auto& [k, c] : report.certificates[a]) {
      if (!k.constraint && k.prolongation.empty()) continue;
      if (!extras) out << "prolonged terms:\n";
      extras = true;
      out << "  " << adj.equations[a].name << ": " << certificate_label(k, ranking) << ": " << to_string(c) << "\n";
    }
  }
  out << "residual:\n";
  for (std::size_t a = 0; a < sys.m(); ++a)
    out << "  " << adj.equations[a].name << ": " << to_string(report.residuals[a]) << "\n";
}

inline int cmd_selfadjoint_check(const ModelFile& model, const CommandOptions& opt, std::ostream& out) {
  if (opt.sub.empty()) throw Error("--sub is required");
  DiffSystem sys = model.system();
  const Substitution& sub = model.substitution(opt.sub);
  Ranking ranking(sys);
  auto report = check_substitution(sys, sub, ranking);
  out << "substitution " << sub.name() << " (" << to_string(report.substitution_class) << "):\n"
      << substitution_lines(sub, sys.space());
  print_report(out, sys, ranking, report);
  return report.verdict ? kExitOk : kExitMath;
}

inline int cmd_selfadjoint_find(const ModelFile& model, const CommandOptions& opt, std::ostream& out) {
  if (opt.ansatz.empty()) throw Error("--ansatz is required");
  AnsatzSpec spec = parse_ansatz(opt.ansatz);
  DiffSystem sys = model.system();
  auto found = find_substitution(sys, spec);
  if (!found) {
    out << "none\n";
    return kExitMath;
  }
  out << "found " << found->name() << " substitution (" << to_string(found->validate(sys.space())) << "):\n"
      << substitution_lines(*found, sys.space());
  return kExitOk;
}

inline int cmd_multiplier(const ModelFile& model, const CommandOptions& opt, std::ostream& out) {
  if (opt.sub.empty()) throw Error("--sub is required");
  DiffSystem sys = model.system();
  auto mf = multiplier_form(sys, model.substitution(opt.sub));
  out << "multiplier: mu = " << to_string(mf.multiplier) << "\n";
  for (const auto& eq : mf.system.equations()) out << "equation " << eq.name << ": " << to_string(eq.lhs) << " = 0\n";
  out << "strict self-adjointness (v = u): " << (mf.strict_check.verdict ? "yes" : "no") << "\n";
  return mf.strict_check.verdict ? kExitOk : kExitMath;
}

inline int cmd_conslaw(const ModelFile& model, const CommandOptions& opt, std::ostream& out) {
  if (opt.sym.empty()) throw Error("--sym is required");
  if (opt.sub.empty()) throw Error("--sub is required");
  DiffSystem sys = model.system();
  const Generator& X = model.symmetry(opt.sym);
  const Substitution& sub = model.substitution(opt.sub);
  Ranking ranking(sys);
  ConservedVector cv = conserved_vector(sys, X, sub, opt.unchecked);
  cv.generator = opt.sym;
  if (opt.strip) cv = strip_trivial(cv, ranking);
  out << "symmetry: " << opt.sym << "\nsubstitution: " << sub.name() << (opt.strip ? " (stripped)" : "") << "\n";
  out << "conserved vector:\n";
  const auto& xs = sys.space().independents();
  for (std::size_t i = 0; i < xs.size(); ++i) out << "  C[" << xs[i] << "] = " << to_string(cv.components[i]) << "\n";
  if (!opt.verify) return kExitOk;
  VerifyOptions vo;
  vo.seed = resolve_seed(opt, model);
  vo.tolerance = resolve_tolerance(opt, model);
  auto report = verify(cv, ranking, vo);
  out << "verification:\n" << to_text(report, ranking);
  return report.passed() ? kExitOk : kExitMath;
}

inline int cmd_reduce(const ModelFile& model, const CommandOptions& opt, std::ostream& out) {
  DiffSystem sys = model.system();
  Ranking ranking(sys);
  Expr e;
  try {
    e = parse_expr(opt.expr, sys.space());
  } catch (const ParseError& p) {
    throw Error(std::string("in --expr: ") + p.what());
  }
  auto red = ranking.reduce(e);
  out << "normal form: " << to_string(red.normal_form) << "\ncertificate:\n";
  print_certificate(out, red.certificate, ranking);
  return kExitOk;
}

}  // namespace detail

/// Runs one subcommand. Returns 0 on success, 1 on a mathematical failure and
/// 2 on usage or parse errors (with a message on `err`).
inline int run_command(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  using C = CommandOptions::Command;
  try {
    ModelFile model = detail::load_model(opt);
    switch (opt.command) {
      case C::adjoint: return detail::cmd_adjoint(model, out);
      case C::selfadjoint_check: return detail::cmd_selfadjoint_check(model, opt, out);
      case C::selfadjoint_find: return detail::cmd_selfadjoint_find(model, opt, out);
      case C::multiplier: return detail::cmd_multiplier(model, opt, out);
      case C::conslaw: return detail::cmd_conslaw(model, opt, out);
      case C::reduce: return detail::cmd_reduce(model, opt, out);
    }
  } catch (const ParseError& e) {
    err << opt.model_path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const MathError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMath;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace adjflux
