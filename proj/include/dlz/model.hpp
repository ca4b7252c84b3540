#pragma once

#include <vector>

#include "dlz/linalg.hpp"

namespace dlz {

/// The n_a x n_b interaction block V between the lower (a) and upper (b)
/// degenerate sets. Column n holds the couplings of b-state n to every
/// a-state.
class CouplingMatrix {
 public:
  /// Throws InvalidInput for empty or non-finite matrices.
  explicit CouplingMatrix(CMatrix entries);

  Eigen::Index n_a() const { return entries_.rows(); }
  Eigen::Index n_b() const { return entries_.cols(); }
  const CMatrix& entries() const { return entries_; }
  Complex operator()(Eigen::Index m, Eigen::Index n) const { return entries_(m, n); }
  double frobenius_norm() const { return entries_.norm(); }

 private:
  CMatrix entries_;
};

/// Linear detuning Delta(t) = C t, described in scaled time tau = t sqrt(C).
class ChirpSchedule {
 public:
  ChirpSchedule(double chirp_rate, double tau_i, double tau_f);
  ChirpSchedule(double tau_i, double tau_f) : ChirpSchedule(1.0, tau_i, tau_f) {}

  double chirp_rate() const { return chirp_rate_; }
  double tau_i() const { return tau_i_; }
  double tau_f() const { return tau_f_; }

  /// Integrated detuning (tau_f^2 - tau_i^2) / 2.
  double detuning_area() const { return 0.5 * (tau_f_ * tau_f_ - tau_i_ * tau_i_); }

 private:
  double chirp_rate_;
  double tau_i_;
  double tau_f_;
};

struct OrientedCoupling {
  CouplingMatrix coupling;
  bool swapped;
};

/// Enforces n_a >= n_b. A matrix with more columns than rows is replaced by
/// its conjugate transpose and `swapped` is set.
OrientedCoupling normalize_orientation(const CouplingMatrix& raw);

/// A degenerate Landau-Zener problem in scaled units: couplings are divided
/// by sqrt(C) so the detuning of the b-set is simply tau.
///
/// Two labellings coexist. The caller labelling is the one the input was
/// given in (caller a-set first). The oriented labelling puts the larger set
/// first; when `swapped()` is true the caller's b-set becomes the oriented
/// a-set. Every public result is reported in the caller labelling.
class DegenerateLZSystem {
 public:
  DegenerateLZSystem(const CouplingMatrix& raw, const ChirpSchedule& chirp);

  /// Scaled coupling in the oriented labelling (n_a >= n_b).
  const CouplingMatrix& coupling() const { return oriented_; }
  /// Scaled coupling in the caller labelling.
  const CouplingMatrix& caller_coupling() const { return caller_; }
  const ChirpSchedule& chirp() const { return chirp_; }
  bool swapped() const { return swapped_; }

  Eigen::Index dimension() const { return caller_.n_a() + caller_.n_b(); }
  Eigen::Index caller_n_a() const { return caller_.n_a(); }
  Eigen::Index caller_n_b() const { return caller_.n_b(); }

  /// True when caller index i belongs to the caller's a-set.
  bool caller_in_a_set(Eigen::Index i) const { return i < caller_.n_a(); }

  Eigen::Index to_oriented(Eigen::Index caller_index) const;
  Eigen::Index to_caller(Eigen::Index oriented_index) const;

  /// Re-expresses an operator given in the oriented labelling in the caller
  /// labelling (a pure index permutation).
  CMatrix to_caller_basis(const CMatrix& oriented_op) const;
  CMatrix to_oriented_basis(const CMatrix& caller_op) const;

 private:
  CouplingMatrix caller_;
  CouplingMatrix oriented_;
  ChirpSchedule chirp_;
  bool swapped_;
};

/// Hamiltonian [[0, V], [V^dagger, tau 1]] in the caller labelling, scaled
/// units. Hermitian by construction.
CMatrix hamiltonian_at(const DegenerateLZSystem& system, double tau);

}  // namespace dlz
