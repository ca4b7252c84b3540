#pragma once

#include <optional>

#include "dlz/linalg.hpp"

namespace dlz::specfun {

/// Log-Gamma on the principal branch: analytic in the plane cut along the
/// negative real axis, with imaginary part continuous there (the convention
/// of scipy.special.loggamma). Relative error <= 1e-12 for |z| <= 100.
/// Throws InvalidInput at the poles z = 0, -1, -2, ...
Complex log_gamma(Complex z);

Complex gamma(Complex z);

/// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
Complex rgamma(Complex z);

enum class PcfRegime {
  series,      ///< Maclaurin series about the origin
  asymptotic,  ///< large-|z| expansion at fixed order
  recurrence,  ///< Taylor continuation of Weber's equation from the origin
};

struct PcfEvaluation {
  Complex value;
  double est_error = 0.0;  ///< absolute
  PcfRegime regime = PcfRegime::series;

  /// Whether the estimate meets the documented guarantee: relative 1e-9 for
  /// |z| <= 50, absolute 1e-8 allowance beyond.
  bool accurate(double abs_z) const;
};

/// Directions on which D_nu is evaluated by the finite-time Landau-Zener
/// formulas: z = t e^{-i pi/4} or z = t e^{3 i pi/4}, t real of either sign.
enum class Ray { minus_quarter, three_quarter };

/// Parabolic cylinder function D_nu(z) (Whittaker's notation) for complex
/// order and argument. Chooses the regime automatically unless `forced`.
///
/// The accuracy guarantee covers the evaluation rays above; elsewhere the
/// error estimate flags growth of the recessive solution.
PcfEvaluation pcf(Complex nu, Complex z, std::optional<PcfRegime> forced = std::nullopt);

/// D_nu(t e^{i theta}) on one of the two rays. z^2 = -i t^2 is formed
/// exactly, which keeps the e^{-z^2/4} phase accurate for |t| in the
/// hundreds.
PcfEvaluation pcf_on_ray(Complex nu, double t, Ray ray,
                         std::optional<PcfRegime> forced = std::nullopt);

}  // namespace dlz::specfun
