#pragma once

#include "dlz/linalg.hpp"
#include "dlz/model.hpp"

namespace dlz {

/// Morris-Shore factorisation of an oriented coupling matrix V (n_a >= n_b).
///
/// Rows of `a_unitary` are bras: the first n_a - n_b rows span structurally
/// dark a-states, row n_a - n_b + n is the a-partner of channel n. Rows of
/// `b_unitary` are the b-partners. A V B^dagger is zero in its first
/// n_a - n_b rows and diag(lambdas) below.
struct MSDecomposition {
  CMatrix a_unitary;
  CMatrix b_unitary;
  RVector lambdas;  ///< descending, >= 0, one per b-state
  /// Number of zero eigenvalues of V V^dagger. Exceeds n_a - n_b when the
  /// columns of V are linearly dependent; the extra ones show up as
  /// zero-coupling channels.
  Eigen::Index n_dark = 0;

  Eigen::Index n_a() const { return a_unitary.rows(); }
  Eigen::Index n_b() const { return b_unitary.rows(); }
  /// Rows of A that are dark by construction (n_a - n_b).
  Eigen::Index structural_dark() const { return n_a() - n_b(); }
  Eigen::Index zero_channels() const { return n_dark - structural_dark(); }

  /// a_{kn}: component k of the a-partner ket of channel n.
  Complex a_component(Eigen::Index k, Eigen::Index n) const {
    return std::conj(a_unitary(structural_dark() + n, k));
  }
  /// b_{kn}: component k of the b-partner ket of channel n.
  Complex b_component(Eigen::Index k, Eigen::Index n) const {
    return std::conj(b_unitary(n, k));
  }
};

struct MSDiagnostics {
  double ms_residual = 0.0;         ///< max |A V B^dagger - expected| / ||V||_F
  double unitarity_residual = 0.0;  ///< max of the A and B unitarity defects
  double spectral_mismatch = 0.0;   ///< nonzero spectra of VV^dagger vs V^daggerV, relative
  double completeness_residual = 0.0;
  double min_gram_eigenvalue = 0.0;  ///< before clamping, relative to ||V||_F^2
};

/// Couplings with lambda^2 <= kDarkThreshold ||V||_F^2 are treated as zero.
inline constexpr double kDarkThreshold = 1e-12;

/// Diagonalises V^dagger V and V V^dagger and pairs the eigenvectors by
/// shared eigenvalue. The a-partner of a nonzero channel is V|b_n>/lambda_n,
/// so every diagonal entry of A V B^dagger is real and nonnegative.
/// Throws InvalidInput unless n_a >= n_b.
MSDecomposition morris_shore(const CouplingMatrix& v);

/// A V B^dagger. Throws InvalidInput on dimension mismatch.
CMatrix ms_interaction(const MSDecomposition& decomp, const CouplingMatrix& v);

MSDiagnostics diagnose(const MSDecomposition& decomp, const CouplingMatrix& v);

/// Replaces the structurally dark rows of A by `mix` times them. `mix` must
/// be unitary of size n_a - n_b. Observable results must not change.
MSDecomposition with_dark_rotation(const MSDecomposition& decomp, const CMatrix& mix);

}  // namespace dlz
