#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adjflux/commands.hpp"

namespace adjflux {

/// Parses argv-style arguments (without the program name) and runs the
/// selected subcommand.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adjoint systems, self-adjointness and conservation laws of differential equations", "adjflux"};
  app.require_subcommand(1);
  CommandOptions opt;

  std::uint64_t seed = 0;
  double tol = 0;
  int max_order = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", opt.model_path, "Model file")->required();
    sub->add_option("--seed", seed, "Seed for numeric verification");
    sub->add_option("--tol", tol, "Relative tolerance for numeric verification");
    sub->add_option("--max-order", max_order, "Jet-order cap");
  };

  auto* adjoint = app.add_subcommand("adjoint", "Print the formal Lagrangian and the adjoint system");
  add_common(adjoint);

  auto* selfadjoint = app.add_subcommand("selfadjoint", "Check or search substitutions v = phi(x,u)");
  selfadjoint->require_subcommand(1);
  auto* check = selfadjoint->add_subcommand("check", "Check a named substitution");
  add_common(check);
  check->add_option("--sub", opt.sub, "Substitution name")->required();
  auto* find = selfadjoint->add_subcommand("find", "Search a substitution template");
  add_common(find);
  find->add_option("--ansatz", opt.ansatz, "power | affine:<deg> | const")->required();

  auto* multiplier = app.add_subcommand("multiplier", "Rewrite a scalar equation in multiplier form");
  add_common(multiplier);
  multiplier->add_option("--sub", opt.sub, "Substitution name")->required();

  auto* conslaw = app.add_subcommand("conslaw", "Conserved vector of a symmetry");
  add_common(conslaw);
  conslaw->add_option("--sym", opt.sym, "Symmetry name")->required();
  conslaw->add_option("--sub", opt.sub, "Substitution name")->required();
  conslaw->add_flag("--strip", opt.strip, "Remove trivially conserved parts");
  conslaw->add_flag("--verify", opt.verify, "Verify symbolically and numerically");
  conslaw->add_flag("--unchecked", opt.unchecked, "Skip the self-adjointness check of the substitution");

  auto* reduce = app.add_subcommand("reduce", "Reduce an expression modulo the system");
  add_common(reduce);
  reduce->add_option("--expr", opt.expr, "Expression in model syntax")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  using C = CommandOptions::Command;
  if (adjoint->parsed()) opt.command = C::adjoint;
  if (check->parsed()) opt.command = C::selfadjoint_check;
  if (find->parsed()) opt.command = C::selfadjoint_find;
  if (multiplier->parsed()) opt.command = C::multiplier;
  if (conslaw->parsed()) opt.command = C::conslaw;
  if (reduce->parsed()) opt.command = C::reduce;
  for (auto* sub : {adjoint, check, find, multiplier, conslaw, reduce}) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--tol")) opt.tol = tol;
    if (sub->count("--max-order")) opt.max_order = max_order;
  }
  return run_command(opt, out, err);
}

}  // namespace adjflux
