#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dlz/lzcore.hpp"
#include "dlz/oracle.hpp"

namespace dlz::cli {

enum class Command { decompose, propagate, populations, classify, atomic, sweep };

enum ExitCode : int { ok = 0, parse_error = 2, invalid_physics = 3, numerical_failure = 4 };

struct GridSpec {
  int count = 200;
  GridSpacing spacing = GridSpacing::linear;
};

enum class SweepParam { omega, epsilon, theta, tau_f, lambda };

struct SweepSpec {
  SweepParam param = SweepParam::lambda;
  double from = 0.0;
  double to = 1.0;
  int steps = 11;  ///< grid points, endpoints included
};

struct RunConfig {
  Command command = Command::propagate;
  std::optional<std::string> input;
  /// (J_a, J_b) of an atomic transition; the larger chain is the system.
  std::optional<std::pair<double, double>> atomic;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double theta = 0.0;
  std::optional<Method> method;  ///< default finite (asymptotic for classify)
  std::optional<double> tau_i;   ///< overrides the input file
  std::optional<double> tau_f;
  GridSpec grid;
  long initial = 0;
  double tol = 1e-8;  ///< ODE tolerance
  bool verify = false;
  std::optional<SweepSpec> sweep;
  std::optional<std::string> output;  ///< stdout when empty
  int workers = 1;
};

Command parse_command(const std::string& s);
Method parse_method(const std::string& s);
GridSpec parse_grid(const std::string& s);        ///< "N:linear" or "N:log"
SweepSpec parse_sweep(const std::string& s);      ///< "PARAM:FROM:TO:STEPS"
std::pair<double, double> parse_atomic(const std::string& s);  ///< "2:1", "3/2:1/2"

/// Executes one command. Results go to config.output (or `out`), notes about
/// fallbacks and failures to `diag`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& diag);

}  // namespace dlz::cli
