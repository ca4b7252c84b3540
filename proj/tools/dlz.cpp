#include <iostream>

#include <CLI11.hpp>

#include "dlz/cli.hpp"
#include "dlz/error.hpp"

int main(int argc, char** argv) {
  using namespace dlz::cli;
  CLI::App app{"Degenerate Landau-Zener solver"};
  std::string command, method, grid, sweep, atomic;
  RunConfig cfg;
  double tau_i = 0.0, tau_f = 0.0;

  app.add_option("command", command,
                 "decompose | propagate | populations | classify | atomic | sweep")
      ->required();
  app.add_option("--input", cfg.input, "system description (JSON)");
  app.add_option("--atomic", atomic, "atomic transition Ja:Jb, e.g. 2:1 or 3/2:1/2");
  app.add_option("--omega-plus", cfg.omega_plus, "sigma+ Rabi amplitude (units of sqrt C)");
  app.add_option("--omega-minus", cfg.omega_minus, "sigma- Rabi amplitude (units of sqrt C)");
  app.add_option("--theta", cfg.theta, "relative field phase theta_+ - theta_-");
  app.add_option("--method", method, "finite | asymptotic | ode");
  auto* ti = app.add_option("--tau-i", tau_i, "initial scaled time");
  auto* tf = app.add_option("--tau-f", tau_f, "final scaled time");
  app.add_option("--grid", grid, "sampling grid N:linear or N:log (populations)");
  app.add_option("--initial", cfg.initial, "initial state index, 0-based");
  app.add_option("--tol", cfg.tol, "ODE tolerance");
  app.add_flag("--verify", cfg.verify, "cross-check finite against ode, exit 4 on mismatch");
  app.add_option("--sweep", sweep, "PARAM:FROM:TO:STEPS, PARAM in omega, epsilon, theta, tau_f, lambda");
  app.add_option("--output", cfg.output, "output file (default stdout)");
  app.add_option("--workers", cfg.workers, "concurrent sweep points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ExitCode::parse_error;
  }

  try {
    cfg.command = parse_command(command);
    if (!method.empty()) cfg.method = parse_method(method);
    if (!grid.empty()) cfg.grid = parse_grid(grid);
    if (!sweep.empty()) cfg.sweep = parse_sweep(sweep);
    if (!atomic.empty()) cfg.atomic = parse_atomic(atomic);
    if (*ti) cfg.tau_i = tau_i;
    if (*tf) cfg.tau_f = tau_f;
  } catch (const dlz::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCode::parse_error;
  }
  return run(cfg, std::cout, std::cerr);
}
