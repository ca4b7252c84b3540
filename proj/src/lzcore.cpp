#include "dlz/lzcore.hpp"

#include <cmath>

#include "dlz/error.hpp"
#include "dlz/oracle.hpp"
#include "dlz/specfun.hpp"

namespace dlz {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kPcfTolerance = 1e-9;

void check_times(double tau_i, double tau_f) {
  if (!std::isfinite(tau_i) || !std::isfinite(tau_f) || !(tau_i < tau_f))
    throw InvalidInput("need finite tau_i < tau_f");
}

CayleyKlein renormalized(CayleyKlein ck, bool from_ode) {
  const double d = ck.unitarity_defect();
  if (!(d <= 1e-8)) {
    if (from_ode) throw NumericalFailure("channel propagator: unitarity defect above 1e-8");
    throw AccuracyLoss("channel propagator: unitarity defect above 1e-8");
  }
  if (d > 1e-12) {
    const double s = 1.0 / std::sqrt(std::norm(ck.alpha) + std::norm(ck.beta));
    ck.alpha *= s;
    ck.beta *= s;
  }
  return ck;
}

// kappa -> 0 limit of the finite formulas: a stays put, b picks up e^{-i delta}.
CayleyKlein uncoupled(double tau_i, double tau_f) {
  return {std::polar(1.0, 0.25 * (tau_f * tau_f - tau_i * tau_i)), 0.0};
}

CayleyKlein ode_cayley_klein(const LZChannel& ch, double tau_i, double tau_f, double tol) {
  CMatrix v(1, 1);
  v(0, 0) = ch.kappa;
  const auto h = linear_chirp(v);
  IntegrationOptions opt;
  opt.tol = tol;
  // the b column alone fixes alpha and beta
  const auto res = integrate(h, CVector::Unit(2, 1), tau_i, tau_f, opt);
  const auto [ga, gb] = gauge_factors(Gauge::symmetric, tau_i, tau_f);
  // column b = g (beta, alpha*)
  return {std::conj(res.state(1) / gb), res.state(0) / ga};
}

}  // namespace

LZChannel LZChannel::from_scaled(double lambda_scaled) {
  if (!(lambda_scaled >= 0.0) || !std::isfinite(lambda_scaled))
    throw InvalidInput("LZChannel: coupling must be finite and nonnegative");
  LZChannel c;
  c.lambda = lambda_scaled;
  c.kappa = lambda_scaled;
  c.big_lambda = c.kappa * c.kappa;
  return c;
}

LZChannel LZChannel::from_physical(double lambda, double chirp_rate) {
  if (!(chirp_rate > 0.0) || !std::isfinite(chirp_rate))
    throw InvalidInput("LZChannel: chirp rate must be positive");
  return from_scaled(lambda / std::sqrt(chirp_rate));
}

CayleyKlein cayley_klein_finite(const LZChannel& ch, double tau_i, double tau_f) {
  check_times(tau_i, tau_f);
  if (ch.kappa == 0.0) return uncoupled(tau_i, tau_f);
  using specfun::Ray;
  const Complex nu(0.0, ch.big_lambda);

  // Gamma(1 - i k^2) is split as sqrt|Gamma| onto each factor so neither the
  // gamma function nor the D products leave the double range at large k^2.
  const Complex lg = specfun::log_gamma(1.0 - nu);
  const double half = std::exp(0.5 * lg.real());
  const Complex phase = std::polar(1.0, lg.imag());

  const auto eval = [&](Complex order, double t, Ray ray) {
    auto e = specfun::pcf_on_ray(order, t, ray);
    e.value *= half;
    e.est_error *= half;
    return e;
  };
  const auto fm = eval(nu, tau_f, Ray::minus_quarter);
  const auto ft = eval(nu, tau_f, Ray::three_quarter);
  const auto im1 = eval(nu - 1.0, tau_i, Ray::minus_quarter);
  const auto it1 = eval(nu - 1.0, tau_i, Ray::three_quarter);
  const auto im = eval(nu, tau_i, Ray::minus_quarter);
  const auto it = eval(nu, tau_i, Ray::three_quarter);

  const auto product_error = [](const specfun::PcfEvaluation& x,
                                const specfun::PcfEvaluation& y) {
    return std::abs(x.value) * y.est_error + x.est_error * std::abs(y.value) +
           x.est_error * y.est_error;
  };

  const Complex pa = phase / kSqrt2Pi;
  const Complex pb = phase * std::polar(1.0, 0.25 * kPi) / (ch.kappa * kSqrt2Pi);
  CayleyKlein ck;
  ck.alpha = pa * (fm.value * it1.value + ft.value * im1.value);
  ck.beta = pb * (-fm.value * it.value + ft.value * im.value);
  const double err_alpha = std::abs(pa) * (product_error(fm, it1) + product_error(ft, im1));
  const double err_beta = std::abs(pb) * (product_error(fm, it) + product_error(ft, im));

  const bool finite = std::isfinite(std::abs(ck.alpha)) && std::isfinite(std::abs(ck.beta));
  if (!finite || !(err_alpha <= kPcfTolerance) || !(err_beta <= kPcfTolerance))
    throw AccuracyLoss("cayley_klein_finite: parabolic cylinder evaluation lost accuracy");
  return renormalized(ck, false);
}

AsymptoticCayleyKlein cayley_klein_asymptotic(const LZChannel& ch, double tau_i, double tau_f) {
  check_times(tau_i, tau_f);
  AsymptoticCayleyKlein out;
  const double lam = ch.big_lambda;
  const double reach = 10.0 * std::max(1.0, ch.kappa);
  out.valid = std::abs(tau_i) >= reach && std::abs(tau_f) >= reach;

  out.phase.polynomial_part = 0.25 * (tau_i * tau_i + tau_f * tau_f);
  if (tau_i != 0.0 && tau_f != 0.0)
    out.phase.log_part = 0.5 * lam * std::log(tau_i * tau_i * tau_f * tau_f);
  else
    out.valid = false;
  out.phase.lz_part = 0.25 * kPi + (lam == 0.0 ? 0.0 : specfun::log_gamma({1.0, -lam}).imag());

  out.ck.alpha = std::exp(-kPi * lam);
  out.ck.beta = lam == 0.0 ? Complex(0.0)
                           : -std::polar(std::sqrt(-std::expm1(-2.0 * kPi * lam)),
                                         out.phase.total());
  return out;
}

double lz_probability(double big_lambda) {
  if (!(big_lambda >= 0.0)) throw InvalidInput("lz_probability: Lambda must be nonnegative");
  return -std::expm1(-2.0 * kPi * big_lambda);
}

std::pair<Complex, Complex> gauge_factors(Gauge gauge, double tau_i, double tau_f) {
  const double delta = 0.5 * (tau_f * tau_f - tau_i * tau_i);
  switch (gauge) {
    case Gauge::symmetric: {
      const Complex g = std::polar(1.0, -0.5 * delta);
      return {g, g};
    }
    case Gauge::none: return {1.0, 1.0};
    case Gauge::b_phase: return {1.0, std::polar(1.0, -delta)};
  }
  return {1.0, 1.0};
}

CMatrix channel_matrix(const CayleyKlein& ck, Gauge gauge, double tau_i, double tau_f) {
  const auto [ga, gb] = gauge_factors(gauge, tau_i, tau_f);
  CMatrix u(2, 2);
  u << ga * ck.alpha, ga * ck.beta, -gb * std::conj(ck.beta), gb * std::conj(ck.alpha);
  return u;
}

CayleyKlein cayley_klein_from_matrix(const CMatrix& u, Gauge gauge, double tau_i,
                                     double tau_f) {
  if (u.rows() != 2 || u.cols() != 2) throw InvalidInput("expected a 2x2 propagator");
  const auto [ga, gb] = gauge_factors(gauge, tau_i, tau_f);
  (void)gb;
  return {u(0, 0) / ga, u(0, 1) / ga};
}

ChannelSolution solve_channel(const LZChannel& ch, double tau_i, double tau_f, Method method,
                              double ode_tol) {
  check_times(tau_i, tau_f);
  ChannelSolution s;
  s.requested = method;
  s.used = method;
  switch (method) {
    case Method::asymptotic: {
      // e^{-pi Lambda} is the staying amplitude itself (real in the limit
      // tau_f = -tau_i), so it absorbs the inverse of the a-gauge factor.
      s.ck = cayley_klein_asymptotic(ch, tau_i, tau_f).ck;
      s.ck.alpha *= uncoupled(tau_i, tau_f).alpha;
      return s;
    }
    case Method::ode:
      s.ck = ch.kappa == 0.0 ? uncoupled(tau_i, tau_f)
                             : renormalized(ode_cayley_klein(ch, tau_i, tau_f, ode_tol), true);
      return s;
    case Method::finite:
      try {
        s.ck = cayley_klein_finite(ch, tau_i, tau_f);
      } catch (const AccuracyLoss&) {
        s.ck = renormalized(ode_cayley_klein(ch, tau_i, tau_f, ode_tol), true);
        s.used = Method::ode;
        s.fell_back = true;
      }
      return s;
  }
  return s;
}

CMatrix two_state_propagator(const LZChannel& ch, double tau_i, double tau_f, Method method,
                             Gauge gauge, double ode_tol) {
  if (method == Method::ode) {
    // integrate both columns so the result is the full numerical propagator
    check_times(tau_i, tau_f);
    CMatrix v(1, 1);
    v(0, 0) = ch.kappa;
    IntegrationOptions opt;
    opt.tol = ode_tol;
    CMatrix u = numeric_propagator(linear_chirp(v), tau_i, tau_f, opt);
    if (gauge != Gauge::symmetric) {
      const auto ck = cayley_klein_from_matrix(u, Gauge::symmetric, tau_i, tau_f);
      u = channel_matrix(ck, gauge, tau_i, tau_f);
    }
    return u;
  }
  return channel_matrix(solve_channel(ch, tau_i, tau_f, method, ode_tol).ck, gauge, tau_i,
                        tau_f);
}

}  // namespace dlz
