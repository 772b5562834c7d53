#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fracneumann/acceptance.hpp"
#include "fracneumann/commands.hpp"
#include "fracneumann/run_config.hpp"
#include "fracneumann/version.hpp"

namespace fn = fracneumann;

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and experiment harness for a fractional Neumann reaction-diffusion model"};
  app.set_version_flag("--version", std::string(fn::artifact_version));
  app.set_config("--config", "", "Read options from an INI/TOML file (sections per subcommand)");
  app.require_subcommand(1);

  fn::RunConfig cfg;
  auto add_model = [&cfg](CLI::App* sub) {
    sub->add_option("--domain", cfg.domain_spec, "Domain, interval:L or rectangle:LxW")
        ->capture_default_str();
    sub->add_option("-K,--modes", cfg.num_modes, "Number of eigenmodes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--grid", cfg.grid_size, "Quadrature grid per axis (0: twice the modes)")
        ->capture_default_str();
    sub->add_option("-s,--order", cfg.s, "Fractional order in (0,1)")->capture_default_str();
    sub->add_option("-p,--power", cfg.p, "Nonlinearity exponent, subcritical")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Multistart seed")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "Residual tolerance")->capture_default_str();
    sub->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance and write solution artifacts");
  add_model(solve);
  solve->add_option("--eps", cfg.eps, "Diffusion parameter")->check(CLI::PositiveNumber)->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "Solve across a log-spaced eps range and write a table");
  add_model(sweep);
  sweep->add_option("--eps-min", cfg.eps_min, "Smallest eps")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--eps-max", cfg.eps_max, "Largest eps")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--eps-count", cfg.eps_count, "Number of eps values")->capture_default_str();
  sweep->add_option("--eta-rel", cfg.eta_rel, "Cube-cover threshold relative to the largest-eps sup")
      ->capture_default_str();
  sweep->add_option("--fine-grid", cfg.fine_grid, "Measurement grid per axis (0: auto)")->capture_default_str();
  sweep->add_option("--threads", cfg.threads, "Worker threads")
      ->envname("FRACNEUMANN_THREADS")
      ->capture_default_str();

  CLI::App* extend = app.add_subcommand("extend", "Solve, lift to the weighted half-cylinder, write profiles");
  add_model(extend);
  extend->add_option("--eps", cfg.eps, "Diffusion parameter")->check(CLI::PositiveNumber)->capture_default_str();
  extend->add_option("--y-nodes", cfg.y_nodes, "Extension grid nodes in the lifted direction")
      ->capture_default_str();

  fn::acceptance::Options aopts;
  std::vector<int> criteria;
  CLI::App* check = app.add_subcommand("check", "Run the acceptance criteria and print pass/fail lines");
  check->add_option("--criteria", criteria, "Criterion ids to run (default: all)")->check(CLI::Range(1, 14));
  check->add_option("--scratch", aopts.scratch_dir, "Scratch directory for artifact checks")
      ->capture_default_str();
  check->add_option("--threads", aopts.threads, "Worker threads (0: auto)")
      ->envname("FRACNEUMANN_THREADS")
      ->capture_default_str();
  check->add_flag("--tamper-profile", aopts.rho_tamper,
                  "Negative control: skew the extension kernel so profile checks must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fn::exit_ok : fn::exit_config;
  }

  if (solve->parsed()) return fn::cmd_solve(cfg, std::cout, std::cerr);
  if (sweep->parsed()) return fn::cmd_sweep(cfg, std::cout, std::cerr);
  if (extend->parsed()) return fn::cmd_extend(cfg, std::cout, std::cerr);
  if (check->parsed()) {
    try {
      const auto results = criteria.empty() ? fn::acceptance::run_all(aopts) : fn::acceptance::run(aopts, criteria);
      return fn::acceptance::report(results, std::cout) ? fn::exit_ok : fn::exit_runtime;
    } catch (const std::invalid_argument& e) {
      std::cerr << "configuration error: " << e.what() << "\n";
      return fn::exit_config;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return fn::exit_runtime;
    }
  }
  return fn::exit_config;
}
