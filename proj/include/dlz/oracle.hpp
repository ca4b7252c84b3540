#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "dlz/linalg.hpp"

namespace dlz {

struct IntegrationResult {
  CVector state;
  double norm_defect = 0.0;  ///< | |c|^2 - |c0|^2 |
  long steps = 0;            ///< accepted steps
  double max_local_error = 0.0;
};

/// Arbitrary Hermitian H(tau); integrated in the frame it is given in.
using HamiltonianFn = std::function<CMatrix(double)>;

/// H(tau) = [[0, f(tau) V], [f(tau) V^dagger, Delta(tau) 1]].
///
/// `phase` must be an antiderivative of `detuning`; it drives the rotating
/// frame c_b = e^{-i phase(tau)} d_b, which leaves only the slowly varying
/// amplitudes for the integrator to resolve.
struct BlockHamiltonian {
  CMatrix v;
  std::function<double(double)> envelope;
  std::function<double(double)> detuning;
  std::function<double(double)> phase;

  Eigen::Index n_a() const { return v.rows(); }
  Eigen::Index n_b() const { return v.cols(); }
  Eigen::Index dimension() const { return v.rows() + v.cols(); }
  CMatrix at(double tau) const;
};

/// Constant V, Delta = tau.
BlockHamiltonian linear_chirp(const CMatrix& v);

struct AehPulse {
  double omega0 = 0.0;  ///< peak coupling
  double b = 0.0;       ///< detuning bound
  double t_char = 1.0;  ///< width T

  AehPulse() = default;
  AehPulse(double omega0, double b, double t_char);  // validates
};

/// Couplings omega0 sech(tau/T) * shape, detuning B tanh(tau/T). `shape` is
/// the dimensionless coupling pattern (Omega_mn / Omega).
BlockHamiltonian aeh_block(const AehPulse& pulse, const CMatrix& shape);
CMatrix aeh_hamiltonian(const AehPulse& pulse, const CMatrix& shape, double tau);

enum class Frame { direct, rotating };

struct IntegrationOptions {
  double tol = 1e-10;  ///< per-step absolute error bound, in [1e-12, 1e-4]
  Frame frame = Frame::rotating;
};

/// Dormand-Prince 5(4) with step clamps [1e-12, 1]. tau_f < tau_i integrates
/// backwards. Throws StepUnderflow, InvalidInput on a zero initial state or
/// tolerance outside the range.
IntegrationResult integrate(const HamiltonianFn& h, const CVector& c0, double tau_i,
                            double tau_f, double tol = 1e-10);
IntegrationResult integrate(const BlockHamiltonian& h, const CVector& c0, double tau_i,
                            double tau_f, const IntegrationOptions& opt = {});

/// States at every entry of `taus` (monotone, moving away from tau_i), from
/// a single integration.
std::vector<CVector> integrate_sampled(const BlockHamiltonian& h, const CVector& c0,
                                       double tau_i, const std::vector<double>& taus,
                                       const IntegrationOptions& opt = {});

/// Columns are integrate() applied to the basis vectors.
CMatrix numeric_propagator(const HamiltonianFn& h, Eigen::Index n, double tau_i, double tau_f,
                           double tol = 1e-10);
CMatrix numeric_propagator(const BlockHamiltonian& h, double tau_i, double tau_f,
                           const IntegrationOptions& opt = {});

enum class GridSpacing { linear, log };

/// n sample times ending at tau_f. A linear grid starts at tau_i. A log grid
/// is geometric over positive times: from tau_i when tau_i > 0, otherwise
/// from 1 (requires tau_f > 1).
std::vector<double> tau_grid(double tau_i, double tau_f, int n, GridSpacing spacing);

/// Header tau,re_c1,im_c1,...,re_cN,im_cN,P1,...,PN; one row per sample.
void write_trajectory_csv(std::ostream& out, const std::vector<double>& taus,
                          const std::vector<CVector>& states);

}  // namespace dlz
