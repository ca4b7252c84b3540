#include "dlz/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dlz/error.hpp"

namespace dlz {

namespace {

constexpr int kMaxSweeps = 64;

double off_diagonal_norm2(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index q = 1; q < a.cols(); ++q)
    for (Eigen::Index p = 0; p < q; ++p) s += std::norm(a(p, q));
  return 2.0 * s;
}

// Zeroes a(p,q) with the unitary G = [[c, s u], [-s u*, c]], u = a(p,q)/|a(p,q)|.
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double b = std::abs(apq);
  if (b == 0.0) return;
  const Complex u = apq / b;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double zeta = (aqq - app) / (2.0 * b);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex su = s * u;
  const Complex su_conj = std::conj(su);

  const auto n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - su_conj * akq;
    a(k, q) = su * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - su * aqk;
    a(q, k) = su_conj * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * b;
  a(q, q) = aqq + t * b;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - su_conj * vkq;
    v(k, q) = su * vkp + c * vkq;
  }
}

}  // namespace

void fix_eigenvector_phases(CMatrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    auto col = vectors.col(j);
    const double biggest = col.cwiseAbs().maxCoeff();
    if (biggest == 0.0) continue;
    Eigen::Index pivot = 0;
    while (std::abs(col(pivot)) < biggest * (1.0 - 1e-10)) ++pivot;
    const Complex z = col(pivot);
    col *= std::conj(z) / std::abs(z);
    col(pivot) = std::abs(col(pivot));
  }
}

HermitianEigensystem hermitian_eigensystem(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("eigensystem: matrix must be square");
  if (!all_finite(m)) throw InvalidInput("eigensystem: non-finite entries");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-12 * scale)
    throw InvalidInput("eigensystem: matrix is not Hermitian");

  const auto n = m.rows();
  CMatrix a = 0.5 * (m + m.adjoint());
  CMatrix v = CMatrix::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) a(k, k) = a(k, k).real();

  const double target = std::pow(1e-15 * scale, 2);
  bool converged = n < 2 || scale == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    const double off = off_diagonal_norm2(a);
    converged = off <= target || off == 0.0;
  }
  if (!converged) throw NumericalFailure("eigensystem: Jacobi sweeps did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });

  HermitianEigensystem out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  fix_eigenvector_phases(out.vectors);
  return out;
}

}  // namespace dlz
