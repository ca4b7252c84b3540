#pragma once

#include "dlz/linalg.hpp"

namespace dlz {

struct HermitianEigensystem {
  RVector values;   ///< descending
  CMatrix vectors;  ///< column k belongs to values[k]
};

/// Cyclic complex Jacobi diagonalisation of a small Hermitian matrix.
///
/// Eigenvalues come back in descending order. Each eigenvector is rotated so
/// that its largest-magnitude component (first one on ties) is real and
/// nonnegative; within a degenerate cluster any orthonormal basis may be
/// returned. Throws InvalidInput if `m` is not square or not Hermitian to
/// 1e-12 relative, NumericalFailure if the sweeps do not converge.
HermitianEigensystem hermitian_eigensystem(const CMatrix& m);

/// Applies the phase convention above to every column of `vectors`.
void fix_eigenvector_phases(CMatrix& vectors);

}  // namespace dlz
