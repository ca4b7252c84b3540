#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dlz/linalg.hpp"
#include "dlz/model.hpp"

namespace dlz {

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention, from the Racah
/// formula in exact rational arithmetic. Arguments are integers or
/// half-integers. Returns 0 when a selection rule (M = m1 + m2, triangle)
/// fails; throws InvalidInput for impossible quantum numbers (|m| > j,
/// j + m not integral, negative j).
double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m);

/// Two degenerate levels driven by sigma+ and sigma- fields of Rabi
/// amplitudes omega_plus, omega_minus (scaled units) and phases theta_plus,
/// theta_minus. Lower level a has J = j_a, upper level b has j_b.
struct AtomicTransition {
  double j_a = 2.0;
  double j_b = 1.0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  double omega_pi = 0.0;  ///< linear polarization; not supported, must stay 0

  AtomicTransition() = default;
  /// Validates j_b in {j_a, j_a - 1} and nonnegative amplitudes.
  AtomicTransition(double j_a, double j_b, double omega_plus, double omega_minus,
                   double theta_plus = 0.0, double theta_minus = 0.0);

  /// Omega_+ = Omega sqrt((1+eps)/2), Omega_- = Omega sqrt((1-eps)/2),
  /// theta_+ = theta, theta_- = 0.
  static AtomicTransition from_ellipticity(double j_a, double j_b, double omega,
                                           double epsilon, double theta);

  double omega() const;    ///< sqrt(Omega_+^2 + Omega_-^2)
  double epsilon() const;  ///< (Omega_+^2 - Omega_-^2) / Omega^2, 0 when Omega = 0
  double theta() const { return theta_plus - theta_minus; }
};

struct SublevelLabel {
  char level = 'a';  ///< 'a' or 'b'
  double m = 0.0;
};

/// One chain of sublevels linked by sigma+/- couplings: a-states in
/// ascending M, then b-states in ascending M. V(i, k) = Omega_q e^{i theta_q}
/// <j_a m_i; 1 q | j_b m_k> with q = m_k - m_i.
struct Subsystem {
  std::vector<SublevelLabel> labels;
  Eigen::Index n_a = 0;
  Eigen::Index n_b = 0;
  CMatrix v;  ///< n_a x n_b; empty when the chain holds no b-state

  /// Empty when n_b = 0 (nothing to couple).
  std::optional<CouplingMatrix> coupling() const;
};

/// The two independent chains. `larger` contains M_a = -j_a.
struct SubsystemSplit {
  Subsystem larger;
  Subsystem smaller;
};

/// Throws Unsupported for a nonzero pi amplitude.
SubsystemSplit build_subsystems(const AtomicTransition& t);

enum class ChainKind { j_to_j_minus_1_larger, j_to_j_minus_1_smaller, j_to_j };

/// Closed-form MS couplings for equal sigma+/- amplitudes (epsilon = 0),
/// zeros included for dark states, ascending.
///
/// `omega` is the amplitude of each circular component (Omega_+ = Omega_- =
/// omega), i.e. sqrt(Omega_+^2 + Omega_-^2) / sqrt(2).
std::vector<double> ms_couplings_closed_form(double j, ChainKind kind, double omega);

/// Ratio between the total field amplitude sqrt(Omega_+^2 + Omega_-^2) and
/// the per-component amplitude the closed forms above are written in.
inline const double kClosedFormNormalization = std::sqrt(2.0);

/// MS basis of the J=2 <-> J=1 M-system, components in the order
/// (M_a = -2, 0, 2) and (M_b = -1, 1).
struct J2J1Basis {
  CVector d;
  CVector a1;
  CVector a2;
  CVector b1;
  CVector b2;
};

/// Closed-form MS vectors for ellipticity epsilon and relative phase theta;
/// written in forms that stay finite at epsilon = 0 and |epsilon| = 1.
J2J1Basis table1_coefficients(double epsilon, double theta);

/// (lambda_0, lambda_1, lambda_2) = (0, Omega sqrt((7 + s)/20),
/// Omega sqrt((7 - s)/20)), s = sqrt(1 + 24 epsilon^2).
std::array<double, 3> eigenvalues_j2j1(double omega, double epsilon);

/// xi = pi Omega^2 / (10 C).
double xi_parameter(double omega, double chirp_rate = 1.0);

/// Limit xi -> infinity of the J=2 <-> J=1 probability matrix, ordered
/// (-2, 0, 2, -1, 1); P(f, i). The cross entries that keep the channel
/// phases are evaluated at phi1, phi2.
///
/// The cross entries assume MS vectors in which channel 2 couples with
/// -lambda_2. With phi2 taken as the Landau-Zener phase of the positive
/// coupling, pass phi2 + pi (the propagators of this library do so).
RMatrix adiabatic_probability_matrix(double xi, double phi1, double phi2);

std::string to_string(const SublevelLabel& l);

}  // namespace dlz
