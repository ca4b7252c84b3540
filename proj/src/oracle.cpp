#include "dlz/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dlz/error.hpp"

namespace dlz {

namespace {

constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 1.0;
constexpr double kSafety = 0.9;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void check_tol(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-4))
    throw InvalidInput("integrate: tolerance must lie in [1e-12, 1e-4]");
}

struct GenericRhs {
  const HamiltonianFn& h;
  void operator()(double t, const CVector& y, CVector& dy) const {
    dy.noalias() = h(t) * y;
    dy *= -kI;
  }
};

struct BlockRhs {
  const BlockHamiltonian& h;
  Frame frame;
  void operator()(double t, const CVector& y, CVector& dy) const {
    const auto na = h.n_a();
    const auto nb = h.n_b();
    const double f = h.envelope(t);
    dy.head(na).noalias() = h.v * y.tail(nb);
    dy.tail(nb).noalias() = h.v.adjoint() * y.head(na);
    if (frame == Frame::rotating) {
      const Complex ph = std::polar(1.0, -h.phase(t));
      dy.head(na) *= -kI * f * ph;
      dy.tail(nb) *= -kI * f * std::conj(ph);
    } else {
      dy.head(na) *= -kI * f;
      dy.tail(nb) *= -kI * f;
      dy.tail(nb) += (-kI * h.detuning(t)) * y.tail(nb);
    }
  }
};

// Integrates from t0 through each entry of `stops`, calling on_stop(k, y).
template <class Rhs, class OnStop>
IntegrationResult dp5(const Rhs& rhs, CVector y, double t0, const std::vector<double>& stops,
                      double tol, OnStop on_stop) {
  const auto n = y.size();
  const double norm0 = y.squaredNorm();
  if (norm0 == 0.0) throw InvalidInput("integrate: zero initial state");
  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n);

  IntegrationResult res;
  double t = t0;
  rhs(t, y, k1);
  double h = std::clamp(0.01 / std::max(k1.cwiseAbs().maxCoeff(), 1e-12), 1e-6, kMaxStep);

  for (std::size_t k = 0; k < stops.size(); ++k) {
    const double stop = stops[k];
    const double dir = stop >= t ? 1.0 : -1.0;
    while (std::abs(stop - t) > 0.0) {
      const double remaining = std::abs(stop - t);
      const bool last = h >= remaining;
      const double hs = dir * (last ? remaining : h);

      tmp = y + hs * a21 * k1;
      rhs(t + c2 * hs, tmp, k2);
      tmp = y + hs * (a31 * k1 + a32 * k2);
      rhs(t + c3 * hs, tmp, k3);
      tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * hs, tmp, k4);
      tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * hs, tmp, k5);
      tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + hs, tmp, k6);
      y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double t_new = last ? stop : t + hs;
      rhs(t_new, y5, k7);
      tmp = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double err = tmp.cwiseAbs().maxCoeff();

      const double factor =
          err == 0.0 ? 5.0 : std::clamp(kSafety * std::pow(tol / err, 0.2), 0.2, 5.0);
      if (err <= tol) {
        t = t_new;
        y.swap(y5);
        k1.swap(k7);
        ++res.steps;
        res.max_local_error = std::max(res.max_local_error, err);
        // a step shortened to land on a stop does not shrink the next one
        const double proposal = std::abs(hs) * factor;
        h = std::min(kMaxStep, last ? std::max(h, proposal) : proposal);
      } else {
        h = std::abs(hs) * factor;
        if (h < kMinStep) throw StepUnderflow("integrate: step size fell below 1e-12");
      }
    }
    on_stop(k, y);
  }
  res.norm_defect = std::abs(y.squaredNorm() - norm0);
  res.state = std::move(y);
  return res;
}

CVector to_rotating(const BlockHamiltonian& h, CVector c, double tau) {
  c.tail(h.n_b()) *= std::polar(1.0, h.phase(tau));
  return c;
}

CVector from_rotating(const BlockHamiltonian& h, CVector d, double tau) {
  d.tail(h.n_b()) *= std::polar(1.0, -h.phase(tau));
  return d;
}

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

}  // namespace

CMatrix BlockHamiltonian::at(double tau) const {
  const auto na = n_a();
  const auto nb = n_b();
  const double f = envelope(tau);
  CMatrix m = CMatrix::Zero(na + nb, na + nb);
  m.topRightCorner(na, nb) = f * v;
  m.bottomLeftCorner(nb, na) = f * v.adjoint();
  const double d = detuning(tau);
  for (Eigen::Index k = 0; k < nb; ++k) m(na + k, na + k) = d;
  return m;
}

BlockHamiltonian linear_chirp(const CMatrix& v) {
  return {v, [](double) { return 1.0; }, [](double t) { return t; },
          [](double t) { return 0.5 * t * t; }};
}

AehPulse::AehPulse(double omega0_, double b_, double t_char_)
    : omega0(omega0_), b(b_), t_char(t_char_) {
  if (!(omega0 >= 0.0) || !(b >= 0.0) || !(t_char > 0.0) || !std::isfinite(omega0) ||
      !std::isfinite(b) || !std::isfinite(t_char))
    throw InvalidInput("AehPulse: need omega0 >= 0, B >= 0, T > 0");
}

BlockHamiltonian aeh_block(const AehPulse& p, const CMatrix& shape) {
  const double w = p.omega0, b = p.b, tc = p.t_char;
  return {shape, [w, tc](double t) { return w / std::cosh(t / tc); },
          [b, tc](double t) { return b * std::tanh(t / tc); },
          [b, tc](double t) { return b * tc * log_cosh(t / tc); }};
}

CMatrix aeh_hamiltonian(const AehPulse& pulse, const CMatrix& shape, double tau) {
  return aeh_block(pulse, shape).at(tau);
}

IntegrationResult integrate(const HamiltonianFn& h, const CVector& c0, double tau_i,
                            double tau_f, double tol) {
  check_tol(tol);
  return dp5(GenericRhs{h}, c0, tau_i, {tau_f}, tol, [](std::size_t, const CVector&) {});
}

IntegrationResult integrate(const BlockHamiltonian& h, const CVector& c0, double tau_i,
                            double tau_f, const IntegrationOptions& opt) {
  check_tol(opt.tol);
  if (c0.size() != h.dimension()) throw InvalidInput("integrate: state dimension mismatch");
  if (opt.frame == Frame::direct)
    return dp5(BlockRhs{h, Frame::direct}, c0, tau_i, {tau_f}, opt.tol,
               [](std::size_t, const CVector&) {});
  auto res = dp5(BlockRhs{h, Frame::rotating}, to_rotating(h, c0, tau_i), tau_i, {tau_f},
                 opt.tol, [](std::size_t, const CVector&) {});
  res.state = from_rotating(h, std::move(res.state), tau_f);
  return res;
}

std::vector<CVector> integrate_sampled(const BlockHamiltonian& h, const CVector& c0,
                                       double tau_i, const std::vector<double>& taus,
                                       const IntegrationOptions& opt) {
  check_tol(opt.tol);
  if (c0.size() != h.dimension()) throw InvalidInput("integrate: state dimension mismatch");
  for (std::size_t k = 1; k < taus.size(); ++k)
    if ((taus[k] - taus[k - 1]) * (taus.back() - tau_i) < 0.0)
      throw InvalidInput("integrate_sampled: sample times must be monotone");
  std::vector<CVector> out(taus.size());
  const bool rot = opt.frame == Frame::rotating;
  dp5(BlockRhs{h, opt.frame}, rot ? to_rotating(h, c0, tau_i) : c0, tau_i, taus, opt.tol,
      [&](std::size_t k, const CVector& y) { out[k] = rot ? from_rotating(h, y, taus[k]) : y; });
  return out;
}

CMatrix numeric_propagator(const HamiltonianFn& h, Eigen::Index n, double tau_i, double tau_f,
                           double tol) {
  CMatrix u(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    u.col(j) = integrate(h, CVector::Unit(n, j), tau_i, tau_f, tol).state;
  return u;
}

CMatrix numeric_propagator(const BlockHamiltonian& h, double tau_i, double tau_f,
                           const IntegrationOptions& opt) {
  const auto n = h.dimension();
  CMatrix u(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    u.col(j) = integrate(h, CVector::Unit(n, j), tau_i, tau_f, opt).state;
  return u;
}

std::vector<double> tau_grid(double tau_i, double tau_f, int n, GridSpacing spacing) {
  if (n < 1) throw InvalidInput("tau_grid: need at least one sample");
  if (!(tau_i < tau_f)) throw InvalidInput("tau_grid: need tau_i < tau_f");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (spacing == GridSpacing::linear) {
    for (int k = 0; k < n; ++k)
      out[static_cast<std::size_t>(k)] =
          n == 1 ? tau_f : tau_i + (tau_f - tau_i) * k / static_cast<double>(n - 1);
  } else {
    const double lo = tau_i > 0.0 ? tau_i : 1.0;
    if (!(tau_f > lo)) throw InvalidInput("tau_grid: log grid needs tau_f above its start");
    const double r = std::log(tau_f / lo);
    for (int k = 0; k < n; ++k)
      out[static_cast<std::size_t>(k)] =
          n == 1 ? tau_f : lo * std::exp(r * k / static_cast<double>(n - 1));
  }
  out.back() = tau_f;
  return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<double>& taus,
                          const std::vector<CVector>& states) {
  if (taus.size() != states.size()) throw InvalidInput("write_trajectory_csv: size mismatch");
  const auto n = states.empty() ? 0 : states.front().size();
  out << "tau";
  for (Eigen::Index k = 1; k <= n; ++k) out << ",re_c" << k << ",im_c" << k;
  for (Eigen::Index k = 1; k <= n; ++k) out << ",P" << k;
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < taus.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.10g", taus[r]);
    out << buf;
    for (Eigen::Index k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof buf, ",%.12e,%.12e", states[r](k).real(), states[r](k).imag());
      out << buf;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof buf, ",%.12e", std::norm(states[r](k)));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace dlz
