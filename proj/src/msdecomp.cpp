#include "dlz/msdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dlz/eigensystem.hpp"
#include "dlz/error.hpp"

namespace dlz {

namespace {

// Two passes of modified Gram-Schmidt of `x` against the columns of `basis`.
CVector orthogonalize(CVector x, const std::vector<CVector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : basis) x -= e * e.dot(x);
  return x;
}

}  // namespace

MSDecomposition morris_shore(const CouplingMatrix& coupling) {
  const CMatrix& v = coupling.entries();
  const auto na = v.rows();
  const auto nb = v.cols();
  if (na < nb) throw InvalidInput("morris_shore: coupling must satisfy n_a >= n_b");

  const double norm2 = v.squaredNorm();
  const double threshold = kDarkThreshold * norm2;

  const auto gram = hermitian_eigensystem(v.adjoint() * v);
  const auto outer = hermitian_eigensystem(v * v.adjoint());

  MSDecomposition d;
  d.lambdas = RVector::Zero(nb);
  d.b_unitary = gram.vectors.adjoint();
  d.a_unitary = CMatrix::Zero(na, na);

  std::vector<CVector> partners;
  Eigen::Index rank = 0;
  for (Eigen::Index n = 0; n < nb; ++n) {
    const double w = gram.values(n);
    if (w <= threshold) break;
    d.lambdas(n) = std::sqrt(w);
    partners.emplace_back(v * gram.vectors.col(n) / d.lambdas(n));
    ++rank;
  }

  // Null space of V^dagger: the trailing eigenvectors of V V^dagger, cleaned
  // against the coupled partners.
  std::vector<CVector> basis = partners;
  std::vector<CVector> null_vectors;
  for (Eigen::Index k = rank; k < na; ++k) {
    CVector x = orthogonalize(outer.vectors.col(k), basis);
    const double len = x.norm();
    if (len < 1e-8) throw NumericalFailure("morris_shore: degenerate null-space basis");
    x /= len;
    basis.push_back(x);
    null_vectors.push_back(x);
  }
  d.n_dark = na - rank;

  const auto structural = na - nb;
  CMatrix null_block(na, static_cast<Eigen::Index>(null_vectors.size()));
  for (std::size_t k = 0; k < null_vectors.size(); ++k)
    null_block.col(static_cast<Eigen::Index>(k)) = null_vectors[k];
  fix_eigenvector_phases(null_block);

  for (Eigen::Index k = 0; k < structural; ++k) d.a_unitary.row(k) = null_block.col(k).adjoint();
  for (Eigen::Index n = 0; n < nb; ++n) {
    const CVector ket = n < rank ? partners[static_cast<std::size_t>(n)]
                                 : CVector(null_block.col(structural + (n - rank)));
    d.a_unitary.row(structural + n) = ket.adjoint();
  }
  return d;
}

CMatrix ms_interaction(const MSDecomposition& decomp, const CouplingMatrix& v) {
  if (decomp.n_a() != v.n_a() || decomp.n_b() != v.n_b())
    throw InvalidInput("ms_interaction: decomposition does not match coupling dimensions");
  return decomp.a_unitary * v.entries() * decomp.b_unitary.adjoint();
}

MSDiagnostics diagnose(const MSDecomposition& decomp, const CouplingMatrix& v) {
  MSDiagnostics out;
  const double vnorm = std::max(v.frobenius_norm(), 1e-300);
  const auto na = decomp.n_a();
  const auto nb = decomp.n_b();

  CMatrix expected = CMatrix::Zero(na, nb);
  for (Eigen::Index n = 0; n < nb; ++n) expected(na - nb + n, n) = decomp.lambdas(n);
  out.ms_residual = max_abs(ms_interaction(decomp, v) - expected) / vnorm;
  out.unitarity_residual =
      std::max(unitarity_defect(decomp.a_unitary), unitarity_defect(decomp.b_unitary));

  const CMatrix& m = v.entries();
  const auto gram = hermitian_eigensystem(m.adjoint() * m);
  const auto outer = hermitian_eigensystem(m * m.adjoint());
  out.min_gram_eigenvalue = gram.values.minCoeff() / (vnorm * vnorm);
  double mismatch = 0.0;
  for (Eigen::Index n = 0; n < nb; ++n) {
    const double w = gram.values(n);
    if (w <= kDarkThreshold * vnorm * vnorm) continue;
    mismatch = std::max(mismatch, std::abs(w - outer.values(n)) / w);
  }
  out.spectral_mismatch = mismatch;

  CMatrix completeness = CMatrix::Zero(na, na);
  for (Eigen::Index k = 0; k < na; ++k) {
    CVector ket = decomp.a_unitary.row(k).adjoint();
    completeness += ket * ket.adjoint();
  }
  out.completeness_residual = max_abs(completeness - CMatrix::Identity(na, na));
  return out;
}

MSDecomposition with_dark_rotation(const MSDecomposition& decomp, const CMatrix& mix) {
  const auto k = decomp.structural_dark();
  if (mix.rows() != k || mix.cols() != k)
    throw InvalidInput("with_dark_rotation: mixing matrix must match the dark dimension");
  if (k > 0 && unitarity_defect(mix) > 1e-10)
    throw InvalidInput("with_dark_rotation: mixing matrix is not unitary");
  MSDecomposition out = decomp;
  if (k > 0) out.a_unitary.topRows(k) = mix * decomp.a_unitary.topRows(k);
  return out;
}

}  // namespace dlz
