// pswave: traveling-wave profiles of the delayed pseudoparabolic logistic equation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pswave/cli.hpp"

namespace {

using namespace pswave;

struct Overrides {
  std::optional<double> c, tau, dt, dx, T, X;
};

int run(int argc, char** argv) {
  CLI::App app{"pswave: traveling-wave profiles for a delayed pseudoparabolic reaction-diffusion equation"};
  app.require_subcommand(0, 1);
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool defaults = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "directory for output artifacts");
  app.add_option("--seed", seed, "seed for randomized property checks");
  app.add_flag("--defaults", defaults, "print the default configuration and exit");

  auto* roots = app.add_subcommand("roots", "kernel roots, Vieta residuals, mu0, positive root pair");
  auto* kernel = app.add_subcommand("kernel", "closed-form Green's function report");
  auto* verify = app.add_subcommand("verify-bounds", "certify the super- and sub-solution");
  bool scan = false;
  verify->add_flag("--scan", scan, "also search the largest certified delay");
  auto* solve = app.add_subcommand("solve", "compute the profile by monotone iteration");
  cli::SolveOptions solve_opt;
  solve->add_flag("--skip-bounds", solve_opt.skip_bounds, "iterate without certifying the bounds");
  auto* evolve = app.add_subcommand("evolve", "cross-check a profile with the PDE");
  cli::EvolveOptions evolve_opt;
  Overrides ov;
  evolve->add_option("--profile", evolve_opt.profile_path, "profile CSV (xi,value)")->required();
  evolve->add_option("--c", ov.c, "wave speed");
  evolve->add_option("--tau", ov.tau, "delay in time units");
  evolve->add_option("--dt", ov.dt, "time step");
  evolve->add_option("--dx", ov.dx, "space step");
  evolve->add_option("--T", ov.T, "horizon");
  evolve->add_option("--X", ov.X, "half width of the PDE domain");
  evolve->add_flag("--compare", evolve_opt.compare, "also run the ordered-data comparison probe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  Json report;
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (defaults) {
      std::cout << dump_json(to_json(RunConfig{}));
      return cli::kExitOk;
    }
    if (ov.c) cfg.c = *ov.c;
    if (ov.tau) cfg.tau = *ov.tau;
    if (ov.dt) cfg.pde.dt = *ov.dt;
    if (ov.dx) cfg.pde.dx = *ov.dx;
    if (ov.T) cfg.pde.T = *ov.T;
    if (ov.X) cfg.pde.X = *ov.X;
    cli::Output out;
    if (!out_dir.empty()) out.dir = out_dir;

    if (*roots) {
      cli::cmd_roots(cfg, report);
      out.write("roots.json", dump_json(report));
    } else if (*kernel) {
      cli::cmd_kernel(cfg, out, report);
      out.write("kernel.json", dump_json(report));
    } else if (*verify) {
      cli::cmd_verify(cfg, report, scan);
      out.write("bounds.json", dump_json(report));
    } else if (*solve) {
      cli::cmd_solve(cfg, out, report, solve_opt);
    } else if (*evolve) {
      cli::cmd_evolve(cfg, out, report, evolve_opt);
    } else {
      std::cout << app.help();
      return cli::kExitUsage;
    }
    report["status"] = "ok";
    std::cout << dump_json(report);
    return cli::kExitOk;
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = {{"code", std::string(error_name(e.code()))}, {"message", e.what()}};
    std::cout << dump_json(report);
    std::cerr << e.what() << '\n';
    return cli::exit_code(e.code());
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
