#include "dlz/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <boost/multiprecision/cpp_int.hpp>

#include "dlz/error.hpp"

namespace dlz {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// 2j as an integer; throws unless j is a finite integer or half-integer.
int twice(double j, const char* what) {
  const double t = 2.0 * j;
  if (!std::isfinite(t) || std::abs(t) > 1e6 || t != std::round(t))
    throw InvalidInput(std::string(what) + " must be an integer or half-integer");
  return static_cast<int>(std::lround(t));
}

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void check_pair(int tj, int tm, const char* what) {
  if (tj < 0) throw InvalidInput(std::string(what) + ": negative angular momentum");
  if (std::abs(tm) > tj || (tj + tm) % 2 != 0)
    throw InvalidInput(std::string(what) + ": projection incompatible with angular momentum");
}

// All arguments doubled. Returns C with the sign carried separately.
double racah(int j1, int m1, int j2, int m2, int j, int m) {
  // every combination below is even, halve once
  const auto h = [](int x) { return x / 2; };
  cpp_rational prefactor(cpp_int(j + 1) * factorial(h(j + j1 - j2)) * factorial(h(j - j1 + j2)) *
                             factorial(h(j1 + j2 - j)),
                         factorial(h(j1 + j2 + j) + 1));
  prefactor *= cpp_rational(factorial(h(j + m)) * factorial(h(j - m)) * factorial(h(j1 - m1)) *
                            factorial(h(j1 + m1)) * factorial(h(j2 - m2)) * factorial(h(j2 + m2)));

  cpp_rational sum = 0;
  const int kmin = std::max({0, h(j2 - j - m1), h(j1 + m2 - j)});
  const int kmax = std::min({h(j1 + j2 - j), h(j1 - m1), h(j2 + m2)});
  for (int k = kmin; k <= kmax; ++k) {
    const cpp_int den = factorial(k) * factorial(h(j1 + j2 - j) - k) * factorial(h(j1 - m1) - k) *
                        factorial(h(j2 + m2) - k) * factorial(h(j - j2 + m1) + k) *
                        factorial(h(j - j1 - m2) + k);
    sum += cpp_rational(k % 2 == 0 ? 1 : -1, den);
  }
  if (sum == 0) return 0.0;
  const cpp_rational squared = prefactor * sum * sum;
  const double mag = std::sqrt(static_cast<double>(squared));
  return sum > 0 ? mag : -mag;
}

struct Chain {
  std::vector<int> a;  // doubled M values
  std::vector<int> b;
};

Chain chain_from(int tja, int tjb, int start) {
  Chain c;
  for (int m = start; m <= tja; m += 4) c.a.push_back(m);
  // b-states sit one unit (two halves) away from a-states of the chain
  for (int m = start - 2; m <= tja + 2; m += 4)
    if (std::abs(m) <= tjb) c.b.push_back(m);
  return c;
}

Subsystem realize(const Chain& c, const AtomicTransition& t, int tja, int tjb) {
  Subsystem s;
  s.n_a = static_cast<Eigen::Index>(c.a.size());
  s.n_b = static_cast<Eigen::Index>(c.b.size());
  for (int m : c.a) s.labels.push_back({'a', 0.5 * m});
  for (int m : c.b) s.labels.push_back({'b', 0.5 * m});
  if (s.n_b == 0) return s;
  s.v = CMatrix::Zero(s.n_a, s.n_b);
  const Complex plus = std::polar(t.omega_plus, t.theta_plus);
  const Complex minus = std::polar(t.omega_minus, t.theta_minus);
  for (Eigen::Index i = 0; i < s.n_a; ++i) {
    for (Eigen::Index k = 0; k < s.n_b; ++k) {
      const int ma = c.a[static_cast<std::size_t>(i)];
      const int mb = c.b[static_cast<std::size_t>(k)];
      const int q = mb - ma;
      if (std::abs(q) != 2) continue;
      s.v(i, k) = (q > 0 ? plus : minus) * racah(tja, ma, 2, q, tjb, mb);
    }
  }
  return s;
}

double check_epsilon(double epsilon) {
  if (!(std::abs(epsilon) <= 1.0)) throw InvalidInput("ellipticity must lie in [-1, 1]");
  return epsilon;
}

}  // namespace

double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m) {
  const int tj1 = twice(j1, "j1"), tm1 = twice(m1, "m1");
  const int tj2 = twice(j2, "j2"), tm2 = twice(m2, "m2");
  const int tj = twice(j, "J"), tm = twice(m, "M");
  check_pair(tj1, tm1, "clebsch_gordan");
  check_pair(tj2, tm2, "clebsch_gordan");
  check_pair(tj, tm, "clebsch_gordan");
  if (tm != tm1 + tm2) return 0.0;
  if (tj > tj1 + tj2 || tj < std::abs(tj1 - tj2) || (tj1 + tj2 + tj) % 2 != 0) return 0.0;
  return racah(tj1, tm1, tj2, tm2, tj, tm);
}

AtomicTransition::AtomicTransition(double ja, double jb, double op, double om, double tp,
                                   double tm)
    : j_a(ja), j_b(jb), omega_plus(op), omega_minus(om), theta_plus(tp), theta_minus(tm) {
  const int tja = twice(ja, "J_a"), tjb = twice(jb, "J_b");
  if (tja < 0 || tjb < 0) throw InvalidInput("negative angular momentum");
  if (!(tjb == tja || tjb == tja - 2))
    throw Unsupported("only J_b = J_a and J_b = J_a - 1 transitions are supported");
  if (tja == 0) throw Unsupported("J = 0 <-> J = 0 has no sigma transitions");
  if (!(op >= 0.0) || !(om >= 0.0) || !std::isfinite(op) || !std::isfinite(om))
    throw InvalidInput("Rabi amplitudes must be finite and nonnegative");
  if (!std::isfinite(tp) || !std::isfinite(tm)) throw InvalidInput("field phases must be finite");
}

AtomicTransition AtomicTransition::from_ellipticity(double ja, double jb, double omega,
                                                    double epsilon, double theta) {
  check_epsilon(epsilon);
  if (!(omega >= 0.0)) throw InvalidInput("Rabi amplitude must be nonnegative");
  return {ja, jb, omega * std::sqrt(0.5 * (1.0 + epsilon)),
          omega * std::sqrt(0.5 * (1.0 - epsilon)), theta, 0.0};
}

double AtomicTransition::omega() const { return std::hypot(omega_plus, omega_minus); }

double AtomicTransition::epsilon() const {
  const double o2 = omega_plus * omega_plus + omega_minus * omega_minus;
  return o2 == 0.0 ? 0.0 : (omega_plus * omega_plus - omega_minus * omega_minus) / o2;
}

std::optional<CouplingMatrix> Subsystem::coupling() const {
  if (n_b == 0) return std::nullopt;
  return CouplingMatrix(v);
}

SubsystemSplit build_subsystems(const AtomicTransition& t) {
  if (t.omega_pi != 0.0)
    throw Unsupported("pi polarization couples the two chains and is not supported");
  // re-run the validation for aggregates filled in field by field
  const AtomicTransition checked(t.j_a, t.j_b, t.omega_plus, t.omega_minus, t.theta_plus,
                                 t.theta_minus);
  const int tja = twice(checked.j_a, "J_a"), tjb = twice(checked.j_b, "J_b");
  SubsystemSplit out;
  out.larger = realize(chain_from(tja, tjb, -tja), checked, tja, tjb);
  out.smaller = realize(chain_from(tja, tjb, -tja + 2), checked, tja, tjb);
  return out;
}

std::vector<double> ms_couplings_closed_form(double j, ChainKind kind, double omega) {
  const int tj = twice(j, "J");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidInput("omega must be nonnegative");
  const bool integer = tj % 2 == 0;
  std::vector<double> out;
  switch (kind) {
    case ChainKind::j_to_j_minus_1_larger:
    case ChainKind::j_to_j_minus_1_smaller: {
      if (tj < 2) throw InvalidInput("J -> J-1 needs J >= 1");
      // integer J: n = 0..J, the smaller chain lacks n = J;
      // half-integer J: n = 0..J-1/2 in both chains
      int top = integer ? tj / 2 : (tj - 1) / 2;
      if (integer && kind == ChainKind::j_to_j_minus_1_smaller) --top;
      for (int n = 0; n <= top; ++n)
        out.push_back(omega * std::sqrt(2.0 * n * (tj - n) / (0.5 * tj * (tj + 1))));
      break;
    }
    case ChainKind::j_to_j: {
      if (tj < 1) throw InvalidInput("J -> J needs J >= 1/2");
      const double norm = std::sqrt(0.5 * tj * (0.5 * tj + 1.0) * 2.0);
      const int top = integer ? tj / 2 : (tj - 1) / 2;
      for (int n = 0; n <= top; ++n) out.push_back(omega * (integer ? 2 * n : 2 * n + 1) / norm);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

J2J1Basis table1_coefficients(double epsilon, double theta) {
  const double e = check_epsilon(epsilon);
  const double s = std::sqrt(1.0 + 24.0 * e * e);
  const double one_m_e2 = (1.0 - e) * (1.0 + e);

  RVector d(3), a1(3), a2(3);
  const double nd = 1.0 / (2.0 * std::sqrt(2.0 - e * e));
  d << nd * (1.0 - e), -nd * std::sqrt(6.0 * one_m_e2), nd * (1.0 + e);

  const double r = 24.0 * e / (1.0 + s);
  const double na = 1.0 / std::sqrt(s * (24.0 * (1.0 + e * e) / (1.0 + s) + 12.0));
  a1 << na * 0.5 * (1.0 + e) * (6.0 + r), na * std::sqrt(6.0 * one_m_e2),
      na * 0.5 * (1.0 - e) * (6.0 - r);
  // the partner orthogonal to d and a1 is their cross product
  a2 = d.head<3>().cross(a1.head<3>());
  if (e < 0.0) a1 = -a1;

  // s +- 5 eps with the cancelling one taken from (s+5e)(s-5e) = 1 - e^2
  double sp = s + 5.0 * e, sm = s - 5.0 * e;
  if (e > 0.0) sm = one_m_e2 / sp;
  if (e < 0.0) sp = one_m_e2 / sm;
  const double nb = 1.0 / std::sqrt(2.0 * s);
  RVector b1(2), b2(2);
  b1 << nb * std::sqrt(sp), nb * std::sqrt(sm);
  b2 << nb * std::sqrt(sm), -nb * std::sqrt(sp);

  const auto phased = [theta](const RVector& v, std::initializer_list<int> ms) {
    CVector out(v.size());
    Eigen::Index i = 0;
    for (int m : ms) {
      out(i) = v(i) * std::polar(1.0, -0.5 * m * theta);
      ++i;
    }
    return out;
  };
  return {phased(d, {-2, 0, 2}), phased(a1, {-2, 0, 2}), phased(a2, {-2, 0, 2}),
          phased(b1, {-1, 1}), phased(b2, {-1, 1})};
}

std::array<double, 3> eigenvalues_j2j1(double omega, double epsilon) {
  const double e = check_epsilon(epsilon);
  if (!(omega >= 0.0)) throw InvalidInput("omega must be nonnegative");
  const double s = std::sqrt(1.0 + 24.0 * e * e);
  return {0.0, omega * std::sqrt((7.0 + s) / 20.0), omega * std::sqrt((7.0 - s) / 20.0)};
}

double xi_parameter(double omega, double chirp_rate) {
  if (!(chirp_rate > 0.0)) throw InvalidInput("chirp rate must be positive");
  return kPi * omega * omega / (10.0 * chirp_rate);
}

RMatrix adiabatic_probability_matrix(double xi, double phi1, double phi2) {
  if (!(xi > 0.0)) throw InvalidInput("xi must be positive");
  const Complex x = std::sqrt(3.0 / 16.0) * std::polar(1.0, phi1);
  const Complex y = 0.5 * std::polar(1.0, phi2);
  const double minus = std::norm(x - y), plus = std::norm(x + y);
  RMatrix p(5, 5);
  // order -2, 0, 2 | -1, 1
  p << 1.0 / 64, 3.0 / 32, 1.0 / 64, minus, plus,
       3.0 / 32, 9.0 / 16, 3.0 / 32, 1.0 / 8, 1.0 / 8,
       1.0 / 64, 3.0 / 32, 1.0 / 64, plus, minus,
       minus, 1.0 / 8, plus, 0.0, 0.0,
       plus, 1.0 / 8, minus, 0.0, 0.0;
  return p;
}

std::string to_string(const SublevelLabel& l) {
  const int tm = static_cast<int>(std::lround(2.0 * l.m));
  std::string m = tm % 2 == 0 ? std::to_string(tm / 2) : std::to_string(tm) + "/2";
  return std::string(1, l.level) + "(" + m + ")";
}

}  // namespace dlz
