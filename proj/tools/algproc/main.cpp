#include <CLI11.hpp>
#include <iostream>

#include "algproc/errors.hpp"
#include "commands.hpp"

using namespace algproc;
using namespace algproc::cli;

int main(int argc, char** argv) {
  CLI::App app{"Algebraic process calculus toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--theory", g.theory, "Branching theory")
      ->check(CLI::IsMember({"sl", "cm", "gs", "ca", "cs"}))
      ->capture_default_str();
  app.add_option("--atoms", g.atoms, "Comma separated atoms (gs)");
  app.add_option("--actions", g.actions, "Comma separated names to read as actions");
  app.add_option("--format", g.format, "Output format: text, json or dot");
  app.add_flag("--gkat", g.gkat, "Allow test[b] in star expressions");
  app.add_option("--cap", g.cap, "Reachable state limit")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Shuffle the elimination order (solve)");

  std::string term;
  std::string term2;
  std::string path;
  std::string state;
  bool check = false;
  EStarArgs estar;

  auto* step = app.add_subcommand("step", "Print the one-step behaviour of a term");
  step->add_option("term", term)->required();
  auto* lts = app.add_subcommand("lts", "Export the reachable coalgebra of a term");
  lts->add_option("term", term)->required();
  auto* equiv = app.add_subcommand("equiv", "Decide bisimilarity of two terms");
  equiv->add_option("lhs", term)->required();
  equiv->add_option("rhs", term2)->required();
  auto* solve = app.add_subcommand("solve", "Solve a guarded system or synthesize from a coalgebra");
  solve->add_option("file", path, "System text or coalgebra JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--state", state, "Print only the solution for this state or variable");
  solve->add_flag("--check", check, "Verify the solution up to bisimilarity");
  auto* prove = app.add_subcommand("prove", "Check a proof file");
  prove->add_option("file", path)->required()->check(CLI::ExistingFile);
  auto* skew = app.add_subcommand("skew", "Report whether the theory is skew-associative");

  auto* star = app.add_subcommand("star", "Star fragment");
  star->require_subcommand(1);
  auto* sstep = star->add_subcommand("step", "Print the one-step behaviour of a star expression");
  sstep->add_option("term", term)->required();
  auto* slts = star->add_subcommand("lts", "Export the reachable coalgebra of a star expression");
  slts->add_option("term", term)->required();
  auto* sequiv = star->add_subcommand("equiv", "Decide bisimilarity of two star expressions");
  sequiv->add_option("lhs", term)->required();
  sequiv->add_option("rhs", term2)->required();
  auto* sestar = star->add_subcommand("estar", "Check an instance of an E* axiom");
  sestar->add_option("axiom", estar.axiom, "E1..E6")->required();
  sestar->add_option("-e", estar.e, "Expression e (e1 for E3)");
  sestar->add_option("-f", estar.f, "Expression f (e2 for E3)");
  sestar->add_option("-g", estar.g, "Expression g (e3 for E3)");
  sestar->add_option("--sigma", estar.sigma, "Operation sigma, e.g. '+[b]'");
  sestar->add_option("--tau", estar.tau, "Operation tau");
  sestar->add_flag("--ignore-side-conditions", estar.ignore_side, "Skip syntactic side conditions");
  auto* sderiv = star->add_subcommand("deriv", "Print the partial derivative (sl, gs)");
  sderiv->add_option("term", term)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    std::ostream& out = std::cout;
    if (*step) return cmd_step(g, term, out);
    if (*lts) return cmd_lts(g, term, out);
    if (*equiv) return cmd_equiv(g, term, term2, out);
    if (*solve) return cmd_solve(g, path, state, check, out);
    if (*prove) return cmd_prove(g, path, out);
    if (*skew) return cmd_skew(g, out);
    if (*sstep) return cmd_star_step(g, term, out);
    if (*slts) return cmd_star_lts(g, term, out);
    if (*sequiv) return cmd_star_equiv(g, term, term2, out);
    if (*sestar) return cmd_star_estar(g, estar, out);
    if (*sderiv) return cmd_star_deriv(g, term, out);
  } catch (const InternalError& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
