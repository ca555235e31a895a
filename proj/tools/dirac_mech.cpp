// dirac-mech: verify, compose and simulate interconnected Lagrange-Dirac systems.
#include <iostream>

#include "CLI11.hpp"
#include "dirac/commands.hpp"

int main(int argc, char** argv) {
  using namespace dirac;
  CLI::App app{"Dirac structures and interconnected Lagrange-Dirac systems"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help");

  std::string cfg;
  std::uint64_t seed = kDefaultSeed;

  auto* verify = app.add_subcommand("verify", "check the interconnected Dirac structure at sample points");
  verify->add_option("config", cfg, "system config (JSON)")->required();
  verify->add_option("--seed", seed, "seed for sample points");

  SimulateOverrides ov;
  auto* sim = app.add_subcommand("simulate", "integrate the system and write a CSV trajectory");
  sim->add_option("config", cfg, "system config (JSON)")->required();
  sim->add_option("--h", ov.h, "step size");
  sim->add_option("--t-final", ov.t_final, "final time");
  sim->add_option("--scheme", ov.scheme, "implicit-midpoint or backward-euler");
  sim->add_option("--out", ov.out, "CSV output path (default: config output.path, else stdout)");
  sim->add_option("--seed", ov.seed, "seed for constant-rank sampling");
  sim->add_option("--tol", ov.tol, "Newton residual tolerance");

  std::vector<double> point;
  auto* compose = app.add_subcommand("compose", "report the interconnected structure at a point");
  compose->add_option("config", cfg, "system config (JSON)")->required();
  auto* point_opt = compose->add_option("--point", point, "q then p (2n numbers)");

  auto* selftest = app.add_subcommand("selftest", "run the property suites");
  selftest->add_option("--seed", seed, "case generation seed");

  app.add_subcommand("list", "list builtin systems");

  std::string name;
  bool as_custom = false;
  auto* exp = app.add_subcommand("export", "print a config for a builtin system");
  exp->add_option("name", name, "builtin name")->required();
  exp->add_flag("--custom", as_custom, "write polynomial terms and rows instead of the builtin name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*verify) return cmd_verify(cfg, seed, std::cout, std::cerr);
  if (*sim) return cmd_simulate(cfg, ov, std::cout, std::cerr);
  if (*compose) {
    std::optional<std::vector<double>> p;
    if (point_opt->count() > 0) p = point;
    return cmd_compose(cfg, p, std::cout, std::cerr);
  }
  if (*selftest) return cmd_selftest(seed, std::cout, std::cerr);
  if (app.got_subcommand("list")) return cmd_list(std::cout);
  if (*exp) return cmd_export(name, as_custom, std::cout, std::cerr);
  return kExitUsage;
}
