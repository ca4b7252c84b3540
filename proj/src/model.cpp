#include "dlz/model.hpp"

#include <cmath>
#include <utility>

#include "dlz/error.hpp"

namespace dlz {

CouplingMatrix::CouplingMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1)
    throw InvalidInput("coupling matrix must have at least one row and one column");
  if (!all_finite(entries_))
    throw InvalidInput("coupling matrix has non-finite entries");
}

ChirpSchedule::ChirpSchedule(double chirp_rate, double tau_i, double tau_f)
    : chirp_rate_(chirp_rate), tau_i_(tau_i), tau_f_(tau_f) {
  if (!(chirp_rate_ > 0.0) || !std::isfinite(chirp_rate_))
    throw InvalidInput("chirp rate must be positive and finite");
  if (!std::isfinite(tau_i_) || !std::isfinite(tau_f_))
    throw InvalidInput("tau_i and tau_f must be finite");
  if (!(tau_i_ < tau_f_)) throw InvalidInput("tau_i must be smaller than tau_f");
}

OrientedCoupling normalize_orientation(const CouplingMatrix& raw) {
  if (raw.n_a() >= raw.n_b()) return {raw, false};
  return {CouplingMatrix(raw.entries().adjoint()), true};
}

namespace {

CouplingMatrix scaled(const CouplingMatrix& raw, double chirp_rate) {
  return CouplingMatrix(raw.entries() / std::sqrt(chirp_rate));
}

}  // namespace

DegenerateLZSystem::DegenerateLZSystem(const CouplingMatrix& raw, const ChirpSchedule& chirp)
    : caller_(scaled(raw, chirp.chirp_rate())),
      oriented_(normalize_orientation(caller_).coupling),
      chirp_(chirp),
      swapped_(caller_.n_a() < caller_.n_b()) {}

Eigen::Index DegenerateLZSystem::to_oriented(Eigen::Index caller_index) const {
  if (!swapped_) return caller_index;
  const auto na = caller_.n_a();
  const auto nb = caller_.n_b();
  return caller_index < na ? nb + caller_index : caller_index - na;
}

Eigen::Index DegenerateLZSystem::to_caller(Eigen::Index oriented_index) const {
  if (!swapped_) return oriented_index;
  const auto na = caller_.n_a();
  const auto nb = caller_.n_b();
  return oriented_index < nb ? na + oriented_index : oriented_index - nb;
}

CMatrix DegenerateLZSystem::to_caller_basis(const CMatrix& oriented_op) const {
  if (!swapped_) return oriented_op;
  const auto n = dimension();
  CMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(to_caller(i), to_caller(j)) = oriented_op(i, j);
  return out;
}

CMatrix DegenerateLZSystem::to_oriented_basis(const CMatrix& caller_op) const {
  if (!swapped_) return caller_op;
  const auto n = dimension();
  CMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(to_oriented(i), to_oriented(j)) = caller_op(i, j);
  return out;
}

CMatrix hamiltonian_at(const DegenerateLZSystem& system, double tau) {
  const auto& v = system.caller_coupling().entries();
  const auto na = v.rows();
  const auto nb = v.cols();
  CMatrix h = CMatrix::Zero(na + nb, na + nb);
  h.topRightCorner(na, nb) = v;
  h.bottomLeftCorner(nb, na) = v.adjoint();
  for (Eigen::Index k = 0; k < nb; ++k) h(na + k, na + k) = tau;
  return h;
}

}  // namespace dlz
