#include "dlz/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "dlz/error.hpp"
#include "dlz/oracle.hpp"

namespace dlz {

namespace {

constexpr double kTermThreshold = 1e-12;
constexpr double kEqualCoupling = 1e-12;

void check_channels(const MSDecomposition& decomp, const ChannelSet& ch) {
  if (static_cast<Eigen::Index>(ch.cks.size()) != decomp.n_b())
    throw InvalidInput("channel count does not match the decomposition");
}

CVector a_ket(const MSDecomposition& d, Eigen::Index n) {
  return d.a_unitary.row(d.structural_dark() + n).adjoint();
}

CVector b_ket(const MSDecomposition& d, Eigen::Index n) { return d.b_unitary.row(n).adjoint(); }

Complex global_phase(const DegenerateLZSystem& system) {
  // The oriented problem of a swapped system carries tau 1 on every state.
  return system.swapped() ? std::polar(1.0, -system.chirp().detuning_area()) : Complex(1.0);
}

}  // namespace

std::size_t ChannelSet::fallbacks() const {
  return static_cast<std::size_t>(
      std::count_if(used.begin(), used.end(), [this](Method m) { return m != method; }));
}

ChannelSet solve_channels(const MSDecomposition& decomp, double tau_i, double tau_f,
                          Method method, bool reversed_chirp, double ode_tol) {
  ChannelSet out;
  out.tau_i = tau_i;
  out.tau_f = tau_f;
  out.method = method;
  out.reversed_chirp = reversed_chirp;
  for (Eigen::Index n = 0; n < decomp.n_b(); ++n) {
    const auto sol = solve_channel(LZChannel::from_scaled(decomp.lambdas(n)), tau_i, tau_f,
                                   method, ode_tol);
    out.cks.push_back(sol.ck);
    out.used.push_back(sol.used);
  }
  return out;
}

CMatrix channel_block(const ChannelSet& ch, Eigen::Index n) {
  CMatrix m = channel_matrix(ch.cks.at(static_cast<std::size_t>(n)), ch.gauge, ch.tau_i, ch.tau_f);
  if (ch.reversed_chirp) {
    // [[0, k], [k, -tau]] = -sz H sz, so U = conj(sz U_+ sz)
    m = m.conjugate().eval();
    m(0, 1) = -m(0, 1);
    m(1, 0) = -m(1, 0);
  }
  return m;
}

Propagator ms_propagator(const MSDecomposition& decomp, const ChannelSet& ch) {
  check_channels(decomp, ch);
  const auto na = decomp.n_a();
  const auto nb = decomp.n_b();
  const auto sd = decomp.structural_dark();
  CMatrix u = CMatrix::Identity(na + nb, na + nb);
  for (Eigen::Index n = 0; n < nb; ++n) {
    const CMatrix blk = channel_block(ch, n);
    const Eigen::Index ia = sd + n, ib = na + n;
    u(ia, ia) = blk(0, 0);
    u(ia, ib) = blk(0, 1);
    u(ib, ia) = blk(1, 0);
    u(ib, ib) = blk(1, 1);
  }
  return {u, Basis::morris_shore, ch.tau_i, ch.tau_f, ch.method};
}

Propagator original_propagator(const MSDecomposition& decomp, const ChannelSet& ch) {
  check_channels(decomp, ch);
  const auto na = decomp.n_a();
  const auto nb = decomp.n_b();

  CMatrix u = CMatrix::Zero(na + nb, na + nb);
  u.topLeftCorner(na, na).setIdentity();
  for (Eigen::Index n = 0; n < nb; ++n) {
    const CMatrix blk = channel_block(ch, n);
    const CVector a = a_ket(decomp, n);
    const CVector b = b_ket(decomp, n);
    u.topLeftCorner(na, na) += (blk(0, 0) - 1.0) * a * a.adjoint();
    u.topRightCorner(na, nb) += blk(0, 1) * a * b.adjoint();
    u.bottomLeftCorner(nb, na) += blk(1, 0) * b * a.adjoint();
    u.bottomRightCorner(nb, nb) += blk(1, 1) * b * b.adjoint();
  }

  CMatrix s = CMatrix::Zero(na + nb, na + nb);
  s.topLeftCorner(na, na) = decomp.a_unitary;
  s.bottomRightCorner(nb, nb) = decomp.b_unitary;
  const CMatrix product = s.adjoint() * ms_propagator(decomp, ch).matrix * s;
  if (max_abs(product - u) > 1e-12)
    throw NumericalFailure("original_propagator: projector sums disagree with the basis change");
  return {u, Basis::original, ch.tau_i, ch.tau_f, ch.method};
}

CVector amplitude_formulas(const MSDecomposition& decomp, const ChannelSet& ch, Eigen::Index i) {
  check_channels(decomp, ch);
  const auto na = decomp.n_a();
  const auto nb = decomp.n_b();
  if (i < 0 || i >= na + nb) throw InvalidInput("amplitude_formulas: index out of range");
  CVector col = CVector::Zero(na + nb);
  const bool from_a = i < na;
  if (from_a) col(i) = 1.0;
  for (Eigen::Index n = 0; n < nb; ++n) {
    const CMatrix blk = channel_block(ch, n);
    const Complex start = from_a ? std::conj(decomp.a_component(i, n))
                                 : std::conj(decomp.b_component(i - na, n));
    if (start == 0.0) continue;
    const Complex to_a = from_a ? blk(0, 0) - 1.0 : blk(0, 1);
    const Complex to_b = from_a ? blk(1, 0) : blk(1, 1);
    for (Eigen::Index f = 0; f < na; ++f) col(f) += to_a * decomp.a_component(f, n) * start;
    for (Eigen::Index f = 0; f < nb; ++f) col(na + f) += to_b * decomp.b_component(f, n) * start;
  }
  return col;
}

RMatrix transition_probabilities(const Propagator& u) { return u.matrix.cwiseAbs2(); }

ConvergenceVerdict classify_convergence(const MSDecomposition& decomp,
                                        const std::vector<double>& big_lambdas) {
  const auto na = decomp.n_a();
  const auto nb = decomp.n_b();
  if (static_cast<Eigen::Index>(big_lambdas.size()) != nb)
    throw InvalidInput("classify_convergence: one Lambda per channel expected");
  ConvergenceVerdict v;
  v.n = na + nb;
  v.pairs.resize(static_cast<std::size_t>(v.n * v.n));
  for (Eigen::Index f = 0; f < v.n; ++f) {
    for (Eigen::Index i = 0; i < v.n; ++i) {
      auto& out = v.pairs[static_cast<std::size_t>(f * v.n + i)];
      if ((f < na) == (i < na)) {
        out = {PairStatus::Defined, "same-set"};
        continue;
      }
      const Eigen::Index ia = i < na ? i : f;
      const Eigen::Index ib = i < na ? f - na : i - na;
      std::vector<double> contributing;
      for (Eigen::Index n = 0; n < nb; ++n) {
        const double w = std::abs(decomp.a_component(ia, n) * decomp.b_component(ib, n));
        if (w > kTermThreshold && big_lambdas[static_cast<std::size_t>(n)] > 0.0)
          contributing.push_back(big_lambdas[static_cast<std::size_t>(n)]);
      }
      const auto [lo, hi] = std::minmax_element(contributing.begin(), contributing.end());
      if (contributing.size() <= 1)
        out = {PairStatus::AccidentallyDefined, "single-term"};
      else if (*hi - *lo <= kEqualCoupling)
        out = {PairStatus::AccidentallyDefined, "equal-couplings"};
      else
        out = {PairStatus::Undefined, "divergent-interference"};
    }
  }
  return v;
}

const char* to_string(PairStatus s) {
  switch (s) {
    case PairStatus::Defined: return "Defined";
    case PairStatus::Undefined: return "Undefined";
    case PairStatus::AccidentallyDefined: return "AccidentallyDefined";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::finite: return "finite";
    case Method::asymptotic: return "asymptotic";
    case Method::ode: return "ode";
  }
  return "?";
}

const char* to_string(Basis b) { return b == Basis::original ? "original" : "morris_shore"; }

SystemSolution propagate(const DegenerateLZSystem& system, Method method, double ode_tol) {
  const auto& chirp = system.chirp();
  SystemSolution sol;
  sol.decomp = morris_shore(system.coupling());
  sol.channels = solve_channels(sol.decomp, chirp.tau_i(), chirp.tau_f(),
                                method == Method::ode ? Method::finite : method,
                                system.swapped(), ode_tol);
  if (method == Method::ode) {
    IntegrationOptions opt;
    opt.tol = ode_tol;
    sol.propagator = {numeric_propagator(linear_chirp(system.caller_coupling().entries()),
                                         chirp.tau_i(), chirp.tau_f(), opt),
                      Basis::original, chirp.tau_i(), chirp.tau_f(), Method::ode};
    return sol;
  }
  Propagator p = original_propagator(sol.decomp, sol.channels);
  p.matrix = system.to_caller_basis(global_phase(system) * p.matrix);
  sol.propagator = std::move(p);
  return sol;
}

CVector amplitude_column(const DegenerateLZSystem& system, const SystemSolution& sol,
                         Eigen::Index i) {
  if (i < 0 || i >= system.dimension()) throw InvalidInput("amplitude_column: index out of range");
  const CVector col =
      global_phase(system) * amplitude_formulas(sol.decomp, sol.channels, system.to_oriented(i));
  CVector out(col.size());
  for (Eigen::Index k = 0; k < col.size(); ++k) out(system.to_caller(k)) = col(k);
  return out;
}

ConvergenceVerdict classify(const DegenerateLZSystem& system) {
  const auto decomp = morris_shore(system.coupling());
  std::vector<double> lam;
  for (Eigen::Index n = 0; n < decomp.n_b(); ++n) lam.push_back(decomp.lambdas(n) * decomp.lambdas(n));
  const auto oriented = classify_convergence(decomp, lam);
  ConvergenceVerdict out;
  out.n = oriented.n;
  out.pairs.resize(oriented.pairs.size());
  for (Eigen::Index f = 0; f < out.n; ++f)
    for (Eigen::Index i = 0; i < out.n; ++i)
      out.pairs[static_cast<std::size_t>(f * out.n + i)] =
          oriented.at(system.to_oriented(f), system.to_oriented(i));
  return out;
}

double asymptotic_probability(const DegenerateLZSystem& system, Eigen::Index f, Eigen::Index i) {
  if (f < 0 || f >= system.dimension() || i < 0 || i >= system.dimension())
    throw InvalidInput("asymptotic_probability: index out of range");
  SystemSolution sol;
  sol.decomp = morris_shore(system.coupling());
  sol.channels = solve_channels(sol.decomp, system.chirp().tau_i(), system.chirp().tau_f(),
                                Method::asymptotic, system.swapped());
  return std::norm(amplitude_column(system, sol, i)(f));
}

std::optional<double> infinite_time_probability(const DegenerateLZSystem& system,
                                                Eigen::Index f, Eigen::Index i) {
  if (f < 0 || f >= system.dimension() || i < 0 || i >= system.dimension())
    throw InvalidInput("infinite_time_probability: index out of range");
  if (classify(system).at(f, i).status == PairStatus::Undefined) return std::nullopt;
  return asymptotic_probability(system, f, i);
}

}  // namespace dlz
