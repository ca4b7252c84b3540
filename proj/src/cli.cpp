#include "dlz/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "dlz/assembly.hpp"
#include "dlz/atomic.hpp"
#include "dlz/error.hpp"
#include "dlz/io.hpp"

namespace dlz::cli {

namespace {

constexpr double kDefaultTau = 200.0;
constexpr double kVerifyTolerance = 1e-5;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad number for ") + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw ParseError(std::string("bad number for ") + what + ": '" + s + "'");
  return v;
}

int parse_count(const std::string& s, const char* what) {
  const double v = parse_number(s, what);
  if (v != std::floor(v) || v < 1 || v > 1e7)
    throw ParseError(std::string(what) + " must be a positive integer");
  return static_cast<int>(v);
}

// "3/2" or "1.5" or "2"
double parse_spin(const std::string& s) {
  const auto parts = split(s, '/');
  if (parts.size() == 2)
    return parse_number(parts[0], "angular momentum") / parse_number(parts[1], "angular momentum");
  if (parts.size() == 1) return parse_number(parts[0], "angular momentum");
  throw ParseError("bad angular momentum '" + s + "'");
}

AtomicTransition transition_of(const RunConfig& c) {
  return {c.atomic->first, c.atomic->second, c.omega_plus, c.omega_minus, c.theta, 0.0};
}

DegenerateLZSystem with_times(const DegenerateLZSystem& s, std::optional<double> ti,
                              std::optional<double> tf) {
  const auto& ch = s.chirp();
  const CMatrix raw = s.caller_coupling().entries() * std::sqrt(ch.chirp_rate());
  return {CouplingMatrix(raw),
          ChirpSchedule(ch.chirp_rate(), ti.value_or(ch.tau_i()), tf.value_or(ch.tau_f()))};
}

DegenerateLZSystem from_coupling(const CMatrix& v, const RunConfig& c) {
  return {CouplingMatrix(v),
          ChirpSchedule(c.tau_i.value_or(-kDefaultTau), c.tau_f.value_or(kDefaultTau))};
}

DegenerateLZSystem base_system(const RunConfig& c) {
  if (c.input && c.atomic) throw ParseError("--input and --atomic are exclusive");
  if (c.input) return with_times(read_system_file(*c.input), c.tau_i, c.tau_f);
  if (c.atomic) {
    const auto split = build_subsystems(transition_of(c));
    return from_coupling(split.larger.v, c);
  }
  throw ParseError("a system is required: pass --input FILE or --atomic Ja:Jb");
}

Method method_of(const RunConfig& c) { return c.method.value_or(Method::finite); }

void note_fallbacks(const SystemSolution& sol, std::ostream& diag) {
  const auto k = sol.channels.fallbacks();
  if (sol.propagator.method != Method::ode && k > 0)
    diag << "note: " << k << " of " << sol.channels.cks.size()
         << " channel(s) switched from the special-function route to direct integration\n";
}

// Returns false (and reports) when finite and ode disagree.
bool verify(const DegenerateLZSystem& s, double tol, std::ostream& diag) {
  const CMatrix f = propagate(s, Method::finite, tol).propagator.matrix;
  const CMatrix o = propagate(s, Method::ode, tol).propagator.matrix;
  const double d = max_abs(f - o);
  if (d > kVerifyTolerance) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "verify: finite and ode propagators differ by %.3e\n", d);
    diag << buf;
    return false;
  }
  return true;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

void check_initial(const DegenerateLZSystem& s, long i) {
  if (i < 0 || i >= s.dimension()) throw InvalidInput("--initial is outside the system");
}

int do_populations(const RunConfig& c, std::ostream& out, std::ostream& diag) {
  const auto sys = base_system(c);
  check_initial(sys, c.initial);
  const double ti = sys.chirp().tau_i();
  const auto taus = tau_grid(ti, sys.chirp().tau_f(), c.grid.count, c.grid.spacing);
  const auto n = sys.dimension();
  const CVector c0 = CVector::Unit(n, c.initial);
  std::vector<CVector> states;
  const Method m = method_of(c);
  if (m == Method::ode) {
    IntegrationOptions opt;
    opt.tol = c.tol;
    states = integrate_sampled(linear_chirp(sys.caller_coupling().entries()), c0, ti, taus, opt);
  } else {
    std::size_t fallbacks = 0;
    for (double tau : taus) {
      if (tau <= ti) {
        states.push_back(c0);
        continue;
      }
      const auto sol = propagate(with_times(sys, ti, tau), m, c.tol);
      fallbacks += sol.channels.fallbacks();
      states.push_back(sol.propagator.matrix.col(c.initial));
    }
    if (fallbacks > 0)
      diag << "note: " << fallbacks
           << " channel evaluation(s) switched to direct integration along the grid\n";
  }
  write_trajectory_csv(out, taus, states);
  if (c.verify && !verify(sys, c.tol, diag)) return numerical_failure;
  return ok;
}

int do_classify(const RunConfig& c, std::ostream& out) {
  if (c.method && *c.method != Method::asymptotic)
    throw ParseError("classify works from the asymptotic channels; use --method asymptotic");
  const auto sys = base_system(c);
  const auto v = classify(sys);
  out << "i,f,status,reason,P_limit\n";
  for (Eigen::Index i = 0; i < v.n; ++i)
    for (Eigen::Index f = 0; f < v.n; ++f) {
      const auto& p = v.at(f, i);
      out << i << ',' << f << ',' << to_string(p.status) << ',' << p.reason << ',';
      if (p.status != PairStatus::Undefined)
        out << fmt("%.12e", asymptotic_probability(sys, f, i));
      out << '\n';
    }
  return ok;
}

const char* param_name(SweepParam p) {
  switch (p) {
    case SweepParam::omega: return "omega";
    case SweepParam::epsilon: return "epsilon";
    case SweepParam::theta: return "theta";
    case SweepParam::tau_f: return "tau_f";
    case SweepParam::lambda: return "lambda";
  }
  return "?";
}

DegenerateLZSystem sweep_system(const RunConfig& c, SweepParam p, double x) {
  const auto need_atomic = [&] {
    if (!c.atomic) throw ParseError(std::string("sweeping ") + param_name(p) + " needs --atomic");
    return transition_of(c);
  };
  switch (p) {
    case SweepParam::omega: {
      const auto t = need_atomic();
      const auto u = AtomicTransition::from_ellipticity(t.j_a, t.j_b, x, t.epsilon(), t.theta());
      return from_coupling(build_subsystems(u).larger.v, c);
    }
    case SweepParam::epsilon: {
      const auto t = need_atomic();
      const auto u = AtomicTransition::from_ellipticity(t.j_a, t.j_b, t.omega(), x, t.theta());
      return from_coupling(build_subsystems(u).larger.v, c);
    }
    case SweepParam::theta: {
      auto t = need_atomic();
      t.theta_plus = x;
      t.theta_minus = 0.0;
      return from_coupling(build_subsystems(t).larger.v, c);
    }
    case SweepParam::tau_f: return with_times(base_system(c), std::nullopt, x);
    case SweepParam::lambda: {
      if (!(x >= 0.0)) throw InvalidInput("Lambda must be nonnegative");
      CMatrix v(1, 1);
      if (!c.input && !c.atomic) {
        v(0, 0) = std::sqrt(x);
        return from_coupling(v, c);
      }
      const auto base = base_system(c);
      if (base.dimension() != 2) throw InvalidInput("a Lambda sweep needs a two-state system");
      const double rate = base.chirp().chirp_rate();
      v(0, 0) = std::sqrt(x * rate);
      return {CouplingMatrix(v), base.chirp()};
    }
  }
  throw ParseError("unknown sweep parameter");
}

int do_sweep(const RunConfig& c, std::ostream& out, std::ostream& diag) {
  if (!c.sweep) throw ParseError("sweep needs --sweep PARAM:FROM:TO:STEPS");
  const auto& s = *c.sweep;
  std::vector<double> xs(static_cast<std::size_t>(s.steps));
  for (int k = 0; k < s.steps; ++k)
    xs[static_cast<std::size_t>(k)] =
        s.steps == 1 ? s.from : s.from + (s.to - s.from) * k / static_cast<double>(s.steps - 1);

  // dimension from the first point; every point shares it
  const auto first = sweep_system(c, s.param, xs.front());
  check_initial(first, c.initial);
  const auto n = first.dimension();

  std::vector<std::string> rows(xs.size());
  std::vector<std::exception_ptr> errors(xs.size());
  std::vector<std::size_t> fallbacks(xs.size(), 0);
  std::vector<char> mismatched(xs.size(), 0);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < xs.size(); k = next++) {
      try {
        const auto sys = sweep_system(c, s.param, xs[k]);
        const auto sol = propagate(sys, method_of(c), c.tol);
        fallbacks[k] = sol.propagator.method == Method::ode ? 0 : sol.channels.fallbacks();
        std::string row = fmt("%.10g", xs[k]);
        for (Eigen::Index f = 0; f < n; ++f)
          row += fmt(",%.12e", std::norm(sol.propagator.matrix(f, c.initial)));
        rows[k] = std::move(row);
        if (c.verify) {
          std::ostringstream sink;
          mismatched[k] = !verify(sys, c.tol, sink);
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int nw = std::max(1, std::min<int>(c.workers, static_cast<int>(xs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  out << param_name(s.param);
  for (Eigen::Index f = 1; f <= n; ++f) out << ",P" << f;
  out << '\n';
  for (const auto& r : rows) out << r << '\n';

  std::size_t total = 0;
  for (auto f : fallbacks) total += f;
  if (total > 0) diag << "note: " << total << " channel(s) switched to direct integration\n";
  int status = ok;
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (mismatched[k]) {
      diag << "verify: finite and ode disagree at " << param_name(s.param) << " = "
           << fmt("%.10g", xs[k]) << '\n';
      status = numerical_failure;
    }
  return status;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& diag) {
  if (!(c.tol >= 1e-12 && c.tol <= 1e-4)) throw ParseError("--tol must lie in [1e-12, 1e-4]");
  if (c.workers < 1) throw ParseError("--workers must be at least 1");
  switch (c.command) {
    case Command::decompose: {
      const auto sys = base_system(c);
      out << decomposition_json(sys, morris_shore(sys.coupling())) << '\n';
      return ok;
    }
    case Command::propagate: {
      const auto sys = base_system(c);
      const auto sol = propagate(sys, method_of(c), c.tol);
      note_fallbacks(sol, diag);
      out << propagator_json(sol) << '\n';
      if (c.verify && !verify(sys, c.tol, diag)) return numerical_failure;
      return ok;
    }
    case Command::populations: return do_populations(c, out, diag);
    case Command::classify: return do_classify(c, out);
    case Command::atomic: {
      if (!c.atomic) throw ParseError("atomic needs --atomic Ja:Jb");
      const auto t = transition_of(c);
      out << atomic_json(t, build_subsystems(t), c.tau_i.value_or(-kDefaultTau),
                         c.tau_f.value_or(kDefaultTau))
          << '\n';
      return ok;
    }
    case Command::sweep: return do_sweep(c, out, diag);
  }
  return ok;
}

}  // namespace

Command parse_command(const std::string& s) {
  if (s == "decompose") return Command::decompose;
  if (s == "propagate") return Command::propagate;
  if (s == "populations") return Command::populations;
  if (s == "classify") return Command::classify;
  if (s == "atomic") return Command::atomic;
  if (s == "sweep") return Command::sweep;
  throw ParseError("unknown command '" + s + "'");
}

Method parse_method(const std::string& s) {
  if (s == "finite") return Method::finite;
  if (s == "asymptotic") return Method::asymptotic;
  if (s == "ode") return Method::ode;
  throw ParseError("unknown method '" + s + "'");
}

GridSpec parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw ParseError("--grid expects N:linear or N:log");
  GridSpec g;
  g.count = parse_count(parts[0], "grid size");
  if (parts[1] == "linear")
    g.spacing = GridSpacing::linear;
  else if (parts[1] == "log")
    g.spacing = GridSpacing::log;
  else
    throw ParseError("grid spacing must be linear or log");
  return g;
}

SweepSpec parse_sweep(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 4) throw ParseError("--sweep expects PARAM:FROM:TO:STEPS");
  SweepSpec w;
  const auto& p = parts[0];
  if (p == "omega")
    w.param = SweepParam::omega;
  else if (p == "epsilon")
    w.param = SweepParam::epsilon;
  else if (p == "theta")
    w.param = SweepParam::theta;
  else if (p == "tau_f")
    w.param = SweepParam::tau_f;
  else if (p == "lambda")
    w.param = SweepParam::lambda;
  else
    throw ParseError("sweep parameter must be omega, epsilon, theta, tau_f or lambda");
  w.from = parse_number(parts[1], "sweep start");
  w.to = parse_number(parts[2], "sweep end");
  w.steps = parse_count(parts[3], "sweep steps");
  return w;
}

std::pair<double, double> parse_atomic(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw ParseError("--atomic expects Ja:Jb");
  return {parse_spin(parts[0]), parse_spin(parts[1])};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  try {
    if (config.output) {
      std::ostringstream buffer;
      const int status = dispatch(config, buffer, diag);
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) throw ParseError("cannot write " + *config.output);
      file << buffer.str();
      return status;
    }
    return dispatch(config, out, diag);
  } catch (const ParseError& e) {
    diag << "error: " << e.what() << '\n';
    return parse_error;
  } catch (const Unsupported& e) {
    diag << "error: " << e.what() << '\n';
    return invalid_physics;
  } catch (const InvalidInput& e) {
    diag << "error: " << e.what() << '\n';
    return invalid_physics;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return numerical_failure;
  }
}

}  // namespace dlz::cli
