#pragma once

#include "dlz/linalg.hpp"

namespace dlz {

/// One two-state channel H = [[0, kappa], [kappa, tau]] in scaled units.
///
/// The finite-time formulas take kappa = lambda/sqrt(C) for the channel's own
/// MS coupling, so kappa^2 is the channel adiabaticity Lambda.
struct LZChannel {
  double lambda = 0.0;      ///< MS coupling in units of sqrt(C)
  double big_lambda = 0.0;  ///< lambda^2 / C
  double kappa = 0.0;

  LZChannel() = default;
  /// From a coupling already divided by sqrt(C).
  static LZChannel from_scaled(double lambda_scaled);
  /// From a dimensional coupling and chirp rate.
  static LZChannel from_physical(double lambda, double chirp_rate);
};

struct CayleyKlein {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  double unitarity_defect() const { return std::abs(std::norm(alpha) + std::norm(beta) - 1.0); }
};

/// Phase of beta in the asymptotic regime, split by origin. The first two
/// parts diverge as |tau| grows.
struct AsymptoticPhase {
  double polynomial_part = 0.0;  ///< (tau_i^2 + tau_f^2)/4
  double log_part = 0.0;         ///< (Lambda/2) ln(tau_i^2 tau_f^2)
  double lz_part = 0.0;          ///< pi/4 + arg Gamma(1 - i Lambda)

  double total() const { return polynomial_part + log_part + lz_part; }
};

struct AsymptoticCayleyKlein {
  CayleyKlein ck;
  AsymptoticPhase phase;
  /// Both |tau| >= 10 max(1, kappa); outside that the values are still
  /// returned but should not be trusted.
  bool valid = true;
};

enum class Method { finite, asymptotic, ode };

/// Overall phase convention for a channel propagator. With
/// delta = (tau_f^2 - tau_i^2)/2 the true propagator of the 2x2 Hamiltonian is
/// e^{-i delta/2} [[alpha, beta], [-beta*, alpha*]] (`symmetric`). The other
/// two exist so tests can show they disagree with direct integration.
enum class Gauge { symmetric, none, b_phase };

/// Exact finite-time parameters from parabolic cylinder functions with
/// nu = i kappa^2. kappa = 0 returns the limit alpha = e^{i delta/2}, beta = 0.
/// Throws AccuracyLoss when the special functions cannot meet 1e-9 or the
/// result is not unitary to 1e-8.
CayleyKlein cayley_klein_finite(const LZChannel& channel, double tau_i, double tau_f);

/// alpha = e^{-pi Lambda}, beta = -e^{i phi} sqrt(1 - e^{-2 pi Lambda}).
AsymptoticCayleyKlein cayley_klein_asymptotic(const LZChannel& channel, double tau_i,
                                              double tau_f);

/// 1 - e^{-2 pi Lambda}.
double lz_probability(double big_lambda);

/// Phase of the channel propagator under `gauge`, as the 2x2 diagonal
/// (a, b) factors multiplying the Cayley-Klein matrix.
std::pair<Complex, Complex> gauge_factors(Gauge gauge, double tau_i, double tau_f);

/// diag(ga, gb) [[alpha, beta], [-beta*, alpha*]], basis order (a, b).
CMatrix channel_matrix(const CayleyKlein& ck, Gauge gauge, double tau_i, double tau_f);

/// Recovers (alpha, beta) from a propagator under the given gauge.
CayleyKlein cayley_klein_from_matrix(const CMatrix& u, Gauge gauge, double tau_i,
                                     double tau_f);

struct ChannelSolution {
  /// Always expressed for Gauge::symmetric. For the asymptotic method alpha
  /// is e^{i delta/2} e^{-pi Lambda}, which puts the real staying amplitude
  /// e^{-pi Lambda} on the diagonal of the propagator.
  CayleyKlein ck;
  Method requested = Method::finite;
  Method used = Method::finite;  ///< ode when the finite route fell back
  bool fell_back = false;
};

/// Cayley-Klein parameters by the chosen method. The finite method hands over
/// to direct integration when the special functions lose accuracy; the
/// substitution is recorded in the result. Unitarity defects between 1e-12
/// and 1e-8 are renormalised away.
ChannelSolution solve_channel(const LZChannel& channel, double tau_i, double tau_f,
                              Method method, double ode_tol = 1e-10);

/// 2x2 propagator of the channel, see channel_matrix.
CMatrix two_state_propagator(const LZChannel& channel, double tau_i, double tau_f,
                             Method method, Gauge gauge = Gauge::symmetric,
                             double ode_tol = 1e-10);

}  // namespace dlz
