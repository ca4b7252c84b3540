#include "dlz/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dlz/error.hpp"

namespace dlz::specfun {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kLogPi = 1.1447298858494002;
constexpr double kHalfLog2Pi = 0.91893853320467274;
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kSqrtPi = 1.7724538509055160;

// B_{2k} / (2k (2k-1))
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,      1.0 / 1260.0,     -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0};

bool is_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

// Principal log of sin(pi z), safe for large |Im z|.
Complex log_sinpi(Complex z) {
  const double r = z.real() - 2.0 * std::round(0.5 * z.real());
  const double y = z.imag();
  if (std::abs(y) < 30.0) return std::log(std::sin(kPi * Complex(r, y)));
  const Complex w(r, y);
  Complex out;
  if (y > 0.0)
    out = Complex(kPi * y - std::log(2.0), -kPi * r + 0.5 * kPi) +
          std::log(1.0 - std::exp(2.0 * kI * kPi * w));
  else
    out = Complex(-kPi * y - std::log(2.0), kPi * r - 0.5 * kPi) +
          std::log(1.0 - std::exp(-2.0 * kI * kPi * w));
  return {out.real(), wrap_angle(out.imag())};
}

Complex stirling(Complex w) {
  Complex s = (w - 0.5) * std::log(w) - w + kHalfLog2Pi;
  const Complex inv = 1.0 / w;
  const Complex inv2 = inv * inv;
  Complex p = inv;
  for (double c : kStirling) {
    s += c * p;
    p *= inv2;
  }
  return s;
}

struct Arg {
  Complex z;
  Complex z2;
  Complex log_z;  // meaningless at z = 0
  double abs = 0.0;
  double arg = 0.0;
};

Arg general_arg(Complex z) {
  Arg a{z, z * z, {}, std::abs(z), std::arg(z)};
  if (a.abs > 0.0) a.log_z = std::log(z);
  return a;
}

Arg ray_arg(double t, Ray ray) {
  const double h = std::sqrt(0.5);
  const Complex dir = ray == Ray::minus_quarter ? Complex(h, -h) : Complex(-h, h);
  const double theta = ray == Ray::minus_quarter ? -0.25 * kPi : 0.75 * kPi;
  Arg a;
  a.z = t * dir;
  a.z2 = Complex(0.0, -t * t);
  a.abs = std::abs(t);
  a.arg = t >= 0.0 ? theta : wrap_angle(theta + kPi);
  if (a.abs > 0.0) a.log_z = Complex(std::log(a.abs), a.arg);
  return a;
}

struct Origin {
  Complex value;
  Complex slope;
};

Origin origin_values(Complex nu) {
  const Complex two_nu_half = std::exp(0.5 * nu * std::log(2.0));
  return {two_nu_half * kSqrtPi * rgamma(0.5 * (1.0 - nu)),
          -two_nu_half * std::sqrt(2.0) * kSqrtPi * rgamma(-0.5 * nu)};
}

// Taylor expansion of a solution of w'' = (x^2/4 - nu - 1/2) w about x0,
// evaluated at x0 + h. Returns value and derivative, plus the sum of term
// magnitudes for the rounding estimate.
struct StepResult {
  Complex value;
  Complex slope;
  double magnitude;
};

StepResult taylor_step(Complex nu, Complex x0, Complex x0_sq, Complex w, Complex dw, Complex h) {
  const Complex q0 = 0.25 * x0_sq - nu - 0.5;
  const Complex h2 = h * h;
  const Complex a1 = q0 * h2;
  const Complex a2 = 0.5 * x0 * h2 * h;
  const Complex a3 = 0.25 * h2 * h2;

  Complex tm2 = 0.0, tm1 = w, t = dw * h;  // T_{k-2}, T_{k-1}, T_k with k = 1
  Complex tm3 = 0.0;
  Complex sum = tm1 + t;
  Complex dsum = t;
  double mag = std::abs(tm1) + std::abs(t);
  int small = 0;
  for (int k = 1; k < 400; ++k) {
    // T_{k+1} from T_{k-1}, T_{k-2}, T_{k-3}
    const Complex next =
        (a1 * tm1 + a2 * tm2 + a3 * tm3) / (static_cast<double>(k + 1) * static_cast<double>(k));
    tm3 = tm2;
    tm2 = tm1;
    tm1 = t;
    t = next;
    sum += t;
    dsum += static_cast<double>(k + 1) * t;
    const double at = std::abs(t);
    mag += at;
    small = at <= 1e-18 * std::abs(sum) ? small + 1 : 0;
    if (small >= 4 && k > 4) break;
  }
  return {sum, dsum / h, mag};
}

PcfEvaluation series(Complex nu, const Arg& a) {
  const auto o = origin_values(nu);
  const Complex mult = -(nu + 0.5) * a.z2;
  const Complex mult4 = 0.25 * a.z2 * a.z2;
  Complex t[4] = {0.0, 0.0, o.value, o.slope * a.z};  // T_{k-3}..T_k, k = 1
  Complex sum = t[2] + t[3];
  double mag = std::abs(t[2]) + std::abs(t[3]);
  double last = std::abs(t[3]);
  int small = 0;
  for (int k = 1; k < 4000; ++k) {
    // T_{k+1} = (-(nu+1/2) z^2 T_{k-1} + z^4/4 T_{k-3}) / ((k+1) k)
    const Complex next = (mult * t[2] + mult4 * t[0]) /
                         (static_cast<double>(k + 1) * static_cast<double>(k));
    t[0] = t[1];
    t[1] = t[2];
    t[2] = t[3];
    t[3] = next;
    sum += next;
    last = std::abs(next);
    mag += last;
    small = last <= 1e-18 * std::abs(sum) ? small + 1 : 0;
    if (small >= 4 && k > 4) break;
  }
  return {sum, 4.0 * kEps * mag + last, PcfRegime::series};
}

PcfEvaluation recurrence(Complex nu, const Arg& a) {
  const auto o = origin_values(nu);
  if (a.abs == 0.0) return {o.value, kEps * std::abs(o.value), PcfRegime::recurrence};
  const Complex u = a.z / a.abs;
  const Complex u2 = a.z2 / (a.abs * a.abs);
  const double order_scale = std::sqrt(std::abs(nu + 0.5));
  const double h_order = order_scale > 0.0 ? 1.5 / order_scale : 0.5;

  Complex w = o.value, dw = o.slope;
  double s = 0.0;
  double rel = kEps;
  double peak = std::abs(w);
  while (s < a.abs) {
    double h = std::min({0.5, h_order, s > 0.0 ? 1.5 / s : 0.5, a.abs - s});
    // avoid a sliver of a final step
    if (a.abs - s - h < 1e-3 * h) h = a.abs - s;
    const auto r = taylor_step(nu, u * s, u2 * (s * s), w, dw, u * h);
    w = r.value;
    dw = r.slope;
    const double aw = std::abs(w);
    rel += 2.0 * kEps * r.magnitude / std::max(aw, 1e-300);
    peak = std::max(peak, aw);
    s += h;
  }
  return {w, rel * peak, PcfRegime::recurrence};
}

// Stokes-multiplier smoothing: how much of a subdominant exponential is
// ambiguous at angular distance `dtheta` from its Stokes line.
double stokes_ambiguity(double dtheta, double r) {
  const double phi = 2.0 * std::abs(dtheta);
  if (phi >= 0.5 * kPi) return 0.0;
  const double sigma = 0.5 * r * std::sin(phi) / std::sqrt(std::cos(phi));
  return 0.5 * std::erfc(sigma);
}

struct SeriesSum {
  Complex sum;
  double error;  // relative to a unit prefactor
};

template <class Next>
SeriesSum asymptotic_sum(Next next) {
  Complex sum = 1.0, t = 1.0;
  double mag = 1.0;
  for (int s = 0; s < 400; ++s) {
    const Complex tn = next(t, s);
    const double at = std::abs(tn);
    if (at == 0.0) return {sum, kEps * mag};
    if (at >= std::abs(t)) return {sum, at + kEps * mag};
    if (at <= 1e-17 * std::abs(sum)) return {sum + tn, at + kEps * mag};
    t = tn;
    sum += t;
    mag += at;
  }
  return {sum, std::abs(t) + kEps * mag};
}

PcfEvaluation asymptotic(Complex nu, const Arg& a) {
  if (a.abs == 0.0) return {Complex(0.0), std::numeric_limits<double>::infinity(),
                            PcfRegime::asymptotic};
  const Complex inv2z2 = 1.0 / (2.0 * a.z2);
  const auto s1 = asymptotic_sum([&](Complex t, int s) {
    const double ds = 2.0 * s;
    return -t * (nu - ds) * (nu - ds - 1.0) * inv2z2 / static_cast<double>(s + 1);
  });
  const Complex log_first = -0.25 * a.z2 + nu * a.log_z;
  const double m1 = std::exp(log_first.real());
  Complex value = std::exp(log_first) * s1.sum;
  double err = m1 * s1.error;

  const double sign = a.arg >= 0.0 ? 1.0 : -1.0;
  const Complex rg = rgamma(-nu);
  if (rg != 0.0) {
    const Complex log_second = sign * kI * kPi * nu + 0.25 * a.z2 - (nu + 1.0) * a.log_z;
    const Complex coef = -kSqrt2Pi * rg * std::exp(log_second);
    const double m2 = std::abs(coef);
    const double dist = std::abs(std::abs(a.arg) - 0.5 * kPi);
    if (std::abs(a.arg) > 0.5 * kPi) {
      const auto s2 = asymptotic_sum([&](Complex t, int s) {
        const double ds = 2.0 * s;
        return t * (nu + ds + 1.0) * (nu + ds + 2.0) * inv2z2 / static_cast<double>(s + 1);
      });
      value += coef * s2.sum;
      err += m2 * s2.error;
      err += m1 * stokes_ambiguity(kPi - std::abs(a.arg), a.abs);
    }
    err += m2 * stokes_ambiguity(dist, a.abs);
  }
  return {value, err, PcfRegime::asymptotic};
}

PcfEvaluation evaluate(Complex nu, const Arg& a, std::optional<PcfRegime> forced) {
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) || !std::isfinite(a.abs))
    throw InvalidInput("pcf: non-finite argument");
  if (forced) {
    switch (*forced) {
      case PcfRegime::series: return series(nu, a);
      case PcfRegime::asymptotic: return asymptotic(nu, a);
      case PcfRegime::recurrence: return recurrence(nu, a);
    }
  }
  if (a.abs < 3.0) return series(nu, a);
  if (a.abs >= 4.0) {
    auto asy = asymptotic(nu, a);
    if (asy.est_error <= 1e-14 * std::abs(asy.value)) return asy;
  }
  return recurrence(nu, a);
}

}  // namespace

Complex log_gamma(Complex z) {
  if (is_pole(z)) throw InvalidInput("log_gamma: pole at a nonpositive integer");
  if (z.real() < 0.0) {
    const double shift = std::copysign(2.0 * kPi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
    return Complex(kLogPi, shift) - log_sinpi(z) - log_gamma(1.0 - z);
  }
  Complex w = z;
  Complex acc = 0.0;
  while (std::abs(w) < 15.0) {
    acc += std::log(w);
    w += 1.0;
  }
  return stirling(w) - acc;
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex rgamma(Complex z) {
  if (is_pole(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

bool PcfEvaluation::accurate(double abs_z) const {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || !std::isfinite(est_error))
    return false;
  if (abs_z <= 50.0) return est_error <= 1e-9 * std::abs(value);
  return est_error <= std::max(1e-8, 1e-9 * std::abs(value));
}

PcfEvaluation pcf(Complex nu, Complex z, std::optional<PcfRegime> forced) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidInput("pcf: non-finite argument");
  return evaluate(nu, general_arg(z), forced);
}

PcfEvaluation pcf_on_ray(Complex nu, double t, Ray ray, std::optional<PcfRegime> forced) {
  if (!std::isfinite(t)) throw InvalidInput("pcf_on_ray: non-finite argument");
  return evaluate(nu, ray_arg(t, ray), forced);
}

}  // namespace dlz::specfun
