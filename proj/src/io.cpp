#include "dlz/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dlz/error.hpp"

namespace dlz {

namespace {

using nlohmann::json;

json complex_array(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  return out;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

json system_fields(const CMatrix& couplings, double chirp_rate, double tau_i, double tau_f) {
  json j;
  j["n_a"] = couplings.rows();
  j["n_b"] = couplings.cols();
  j["couplings"] = complex_array(couplings);
  j["chirp_rate"] = chirp_rate;
  j["tau_i"] = tau_i;
  j["tau_f"] = tau_f;
  return j;
}

json system_fields(const DegenerateLZSystem& s) {
  const auto& c = s.chirp();
  return system_fields(s.caller_coupling().entries() * std::sqrt(c.chirp_rate()), c.chirp_rate(),
                       c.tau_i(), c.tau_f());
}

const char* gauge_name(Gauge g) {
  switch (g) {
    case Gauge::symmetric: return "symmetric";
    case Gauge::none: return "none";
    case Gauge::b_phase: return "b_phase";
  }
  return "?";
}

json labels_json(const Subsystem& s) {
  json out = json::array();
  for (const auto& l : s.labels) out.push_back({{"level", std::string(1, l.level)}, {"M", l.m}});
  return out;
}

}  // namespace

DegenerateLZSystem parse_system(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("system description must be a JSON object");
  const auto na = field<long>(j, "n_a");
  const auto nb = field<long>(j, "n_b");
  if (na < 1 || nb < 1) throw InvalidInput("n_a and n_b must be positive");
  const auto raw = field<std::vector<std::vector<double>>>(j, "couplings");
  if (static_cast<long>(raw.size()) != na * nb)
    throw ParseError("couplings must hold n_a * n_b entries");
  CMatrix v(na, nb);
  for (long k = 0; k < na * nb; ++k) {
    if (raw[static_cast<std::size_t>(k)].size() != 2)
      throw ParseError("each coupling must be an [re, im] pair");
    v(k / nb, k % nb) = {raw[static_cast<std::size_t>(k)][0], raw[static_cast<std::size_t>(k)][1]};
  }
  const double rate = j.contains("chirp_rate") ? field<double>(j, "chirp_rate") : 1.0;
  return {CouplingMatrix(v),
          ChirpSchedule(rate, field<double>(j, "tau_i"), field<double>(j, "tau_f"))};
}

DegenerateLZSystem read_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::string system_json(const DegenerateLZSystem& system) {
  return system_fields(system).dump(2);
}

std::string decomposition_json(const DegenerateLZSystem& system, const MSDecomposition& decomp) {
  json j = system_fields(system);
  j["swapped"] = system.swapped();
  j["lambdas"] = std::vector<double>(decomp.lambdas.data(),
                                     decomp.lambdas.data() + decomp.lambdas.size());
  j["n_dark"] = decomp.n_dark;
  j["a_unitary"] = complex_array(decomp.a_unitary);
  j["b_unitary"] = complex_array(decomp.b_unitary);
  const auto diag = diagnose(decomp, system.coupling());
  j["ms_residual"] = diag.ms_residual;
  j["unitarity_residual"] = diag.unitarity_residual;
  return j.dump(2);
}

std::string propagator_json(const SystemSolution& solution) {
  const auto& p = solution.propagator;
  json j;
  j["basis"] = to_string(p.basis);
  j["tau_i"] = p.tau_i;
  j["tau_f"] = p.tau_f;
  j["method"] = to_string(p.method);
  j["gauge"] = gauge_name(solution.channels.gauge);
  j["n"] = p.matrix.rows();
  j["entries"] = complex_array(p.matrix);
  j["unitarity_defect"] = p.unitarity_defect();
  j["fallbacks"] = p.method == Method::ode ? 0 : solution.channels.fallbacks();
  return j.dump(2);
}

void write_probability_csv(std::ostream& out, const Propagator& u, const ConvergenceVerdict& v) {
  const RMatrix p = transition_probabilities(u);
  out << "i,f,P,status\n";
  char buf[64];
  for (Eigen::Index i = 0; i < p.cols(); ++i)
    for (Eigen::Index f = 0; f < p.rows(); ++f) {
      std::snprintf(buf, sizeof buf, "%.12e", p(f, i));
      out << i << ',' << f << ',' << buf << ',' << to_string(v.at(f, i).status) << '\n';
    }
}

void write_verdict_csv(std::ostream& out, const ConvergenceVerdict& v) {
  out << "i,f,status,reason\n";
  for (Eigen::Index i = 0; i < v.n; ++i)
    for (Eigen::Index f = 0; f < v.n; ++f)
      out << i << ',' << f << ',' << to_string(v.at(f, i).status) << ',' << v.at(f, i).reason
          << '\n';
}

std::string atomic_json(const AtomicTransition& t, const SubsystemSplit& split, double tau_i,
                        double tau_f) {
  json j = system_fields(split.larger.v, 1.0, tau_i, tau_f);
  j["j_a"] = t.j_a;
  j["j_b"] = t.j_b;
  j["omega_plus"] = t.omega_plus;
  j["omega_minus"] = t.omega_minus;
  j["labels"] = labels_json(split.larger);
  j["epsilon"] = t.epsilon();
  j["theta"] = t.theta();
  j["xi"] = xi_parameter(t.omega());
  json small;
  small["n_a"] = split.smaller.n_a;
  small["n_b"] = split.smaller.n_b;
  small["couplings"] = complex_array(split.smaller.v);
  small["labels"] = labels_json(split.smaller);
  j["smaller"] = small;
  return j.dump(2);
}

}  // namespace dlz
