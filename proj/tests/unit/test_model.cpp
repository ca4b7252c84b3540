#include <doctest.h>

#include <random>

#include "dlz/atomic.hpp"
#include "dlz/error.hpp"
#include "dlz/model.hpp"
#include "random_systems.hpp"

using namespace dlz;

TEST_CASE("coupling matrix validation") {
  CHECK_THROWS_AS(CouplingMatrix{CMatrix(0, 2)}, InvalidInput);
  CMatrix bad = CMatrix::Ones(2, 2);
  bad(1, 0) = {std::nan(""), 0.0};
  CHECK_THROWS_AS(CouplingMatrix{bad}, InvalidInput);
}

TEST_CASE("chirp schedule validation") {
  CHECK_THROWS_AS(ChirpSchedule(0.0, -1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(ChirpSchedule(1.0, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(ChirpSchedule(1.0, 2.0, 1.0), InvalidInput);
  CHECK(ChirpSchedule(-3.0, 5.0).detuning_area() == doctest::Approx(8.0));
}

TEST_CASE("orientation") {
  std::mt19937 rng(1);
  const CMatrix wide = testing_support::random_coupling(rng, 2, 3);
  const auto o = normalize_orientation(CouplingMatrix(wide));
  CHECK(o.swapped);
  CHECK(o.coupling.n_a() == 3);
  CHECK(max_abs(o.coupling.entries() - wide.adjoint()) == 0.0);

  const CMatrix tall = testing_support::random_coupling(rng, 3, 2);
  const auto t = normalize_orientation(CouplingMatrix(tall));
  CHECK_FALSE(t.swapped);
  CHECK(max_abs(t.coupling.entries() - tall) == 0.0);

  CMatrix one(1, 1);
  one(0, 0) = 0.7;
  CHECK_FALSE(normalize_orientation(CouplingMatrix(one)).swapped);
}

TEST_CASE("label maps are inverse permutations") {
  std::mt19937 rng(2);
  const DegenerateLZSystem s(CouplingMatrix(testing_support::random_coupling(rng, 2, 4)),
                             ChirpSchedule(-5.0, 5.0));
  CHECK(s.swapped());
  for (Eigen::Index i = 0; i < s.dimension(); ++i) CHECK(s.to_caller(s.to_oriented(i)) == i);
  // caller a-states become the oriented b-set
  CHECK(s.to_oriented(0) == 4);
  CHECK(s.to_oriented(2) == 0);
  const CMatrix op = testing_support::random_coupling(rng, 6, 6);
  CHECK(max_abs(s.to_caller_basis(s.to_oriented_basis(op)) - op) == 0.0);
}

TEST_CASE("Hamiltonian structure") {
  std::mt19937 rng(4);
  const CMatrix v = testing_support::random_coupling(rng, 3, 2);
  const DegenerateLZSystem s(CouplingMatrix(v), ChirpSchedule(4.0, -10.0, 10.0));
  for (double tau : {-7.5, 0.0, 3.25}) {
    const CMatrix h = hamiltonian_at(s, tau);
    CHECK(h == h.adjoint());
    CHECK(max_abs(h.topLeftCorner(3, 3)) == 0.0);
    CHECK(max_abs(h.bottomRightCorner(2, 2) - tau * CMatrix::Identity(2, 2)) == 0.0);
    // couplings are scaled by sqrt(C)
    CHECK(max_abs(h.topRightCorner(3, 2) - v / 2.0) < 1e-15);
    const CMatrix diff = h - hamiltonian_at(s, 0.0);
    CHECK(max_abs(diff - diff.diagonal().asDiagonal().toDenseMatrix()) == 0.0);
  }
  CMatrix one(1, 1);
  one(0, 0) = 0.4;
  const CMatrix h = hamiltonian_at(DegenerateLZSystem(CouplingMatrix(one), ChirpSchedule(-1, 1)), 2.0);
  CHECK(h(0, 1) == Complex(0.4));
  CHECK(h(1, 1) == Complex(2.0));
}

TEST_CASE("Hamiltonian of the J=2 to J=1 M-system") {
  const auto t = AtomicTransition(2, 1, 1.5, 0.5, 0.4, -0.2);
  const auto sub = build_subsystems(t).larger;
  const DegenerateLZSystem s(*sub.coupling(), ChirpSchedule(-1.0, 1.0));
  const CMatrix h = hamiltonian_at(s, 0.5);
  const Complex p = std::polar(1.5, 0.4), m = std::polar(0.5, -0.2);
  const double r = 1.0 / std::sqrt(10.0);
  CHECK(std::abs(h(0, 3) - r * std::sqrt(6.0) * p) < 1e-15);
  CHECK(std::abs(h(1, 3) - r * m) < 1e-15);
  CHECK(std::abs(h(1, 4) - r * p) < 1e-15);
  CHECK(std::abs(h(2, 4) - r * std::sqrt(6.0) * m) < 1e-15);
  CHECK(h(0, 4) == Complex(0.0));
  CHECK(h(2, 3) == Complex(0.0));
}
