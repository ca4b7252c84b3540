#include <doctest.h>

#include <random>
#include <sstream>

#include "dlz/atomic.hpp"
#include "dlz/error.hpp"
#include "dlz/lzcore.hpp"
#include "dlz/oracle.hpp"
#include "random_systems.hpp"

using namespace dlz;

namespace {

CMatrix scalar(double k) {
  CMatrix v(1, 1);
  v(0, 0) = k;
  return v;
}

IntegrationOptions with_tol(double tol, Frame f = Frame::rotating) {
  IntegrationOptions o;
  o.tol = tol;
  o.frame = f;
  return o;
}

}  // namespace

TEST_CASE("zero Hamiltonian leaves the state alone") {
  const HamiltonianFn zero = [](double) { return CMatrix::Zero(3, 3); };
  const CVector c0 = CVector::Unit(3, 1) * Complex(0.6, 0.8);
  const auto r = integrate(zero, c0, -5.0, 5.0);
  CHECK(max_abs(r.state - c0) == 0.0);
  CHECK(max_abs(numeric_propagator(zero, 3, 0.0, 2.0) - CMatrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("two-state crossing at unit adiabaticity") {
  const auto r = integrate(linear_chirp(scalar(1.0)), CVector::Unit(2, 0), -200.0, 200.0);
  CHECK(std::abs(std::norm(r.state(1)) - lz_probability(1.0)) < 1e-3);
  CHECK(r.steps > 0);
  CHECK(r.max_local_error <= 1e-10);
}

TEST_CASE("norm conservation") {
  const auto r = integrate(linear_chirp(scalar(1.0)), CVector::Unit(2, 0), -200.0, 200.0,
                           with_tol(1e-11));
  CHECK(r.norm_defect <= 1e-9);
  std::mt19937 rng(8);
  const auto h = linear_chirp(testing_support::random_coupling(rng, 3, 2));
  CHECK(integrate(h, CVector::Unit(5, 2), -50.0, 50.0, with_tol(1e-12)).norm_defect <= 1e-9);
  // the drift accumulates over the steps: a few hundred times the local bound
  for (double tol : {1e-8, 1e-10})
    CHECK(integrate(h, CVector::Unit(5, 2), -50.0, 50.0, with_tol(tol)).norm_defect <= 300 * tol);
}

TEST_CASE("running backwards undoes the evolution") {
  std::mt19937 rng(12);
  const auto h = linear_chirp(testing_support::random_coupling(rng, 3, 2));
  const CVector c0 = CVector::Unit(5, 0);
  const auto fwd = integrate(h, c0, -30.0, 40.0);
  const auto back = integrate(h, fwd.state, 40.0, -30.0);
  CHECK(max_abs(back.state - c0) < 1e-7);
}

TEST_CASE("tighter tolerance moves closer to the reference") {
  const auto h = linear_chirp(scalar(0.8));
  const CVector c0 = CVector::Unit(2, 0);
  const CVector ref = integrate(h, c0, -40.0, 40.0, with_tol(1e-12)).state;
  double prev = 1.0;
  for (double tol : {1e-5, 1e-7, 1e-9}) {
    const double dev = max_abs(integrate(h, c0, -40.0, 40.0, with_tol(tol)).state - ref);
    CAPTURE(tol);
    CHECK(dev < prev);
    CHECK(dev < 1000 * tol);
    prev = dev;
  }
}

TEST_CASE("propagators compose") {
  std::mt19937 rng(13);
  const auto h = linear_chirp(testing_support::random_coupling(rng, 2, 2, 1.5));
  const CMatrix whole = numeric_propagator(h, -20.0, 25.0);
  const CMatrix split = numeric_propagator(h, 3.0, 25.0) * numeric_propagator(h, -20.0, 3.0);
  CHECK(max_abs(whole - split) < 1e-8);
  CHECK(unitarity_defect(whole) < 1e-8);
}

TEST_CASE("rotating and direct frames agree") {
  std::mt19937 rng(14);
  const auto h = linear_chirp(testing_support::random_coupling(rng, 3, 2));
  const CMatrix rot = numeric_propagator(h, -20.0, 20.0, with_tol(1e-10, Frame::rotating));
  const CMatrix dir = numeric_propagator(h, -20.0, 20.0, with_tol(1e-10, Frame::direct));
  CHECK(max_abs(rot - dir) < 1e-8);
  // the generic overload integrates what it is given
  const HamiltonianFn fn = [&](double t) { return h.at(t); };
  CHECK(max_abs(numeric_propagator(fn, 5, -20.0, 20.0) - rot) < 1e-8);
}

TEST_CASE("sampled integration hits every grid point") {
  const auto h = linear_chirp(scalar(1.1));
  const CVector c0 = CVector::Unit(2, 0);
  const auto taus = tau_grid(-30.0, 30.0, 7, GridSpacing::linear);
  const auto states = integrate_sampled(h, c0, -30.0, taus);
  REQUIRE(states.size() == taus.size());
  CHECK(max_abs(states.front() - c0) == 0.0);
  for (std::size_t k = 1; k < taus.size(); ++k)
    CHECK(max_abs(states[k] - integrate(h, c0, -30.0, taus[k]).state) < 1e-8);
  CHECK_THROWS_AS(integrate_sampled(h, c0, -30.0, {0.0, -10.0, 5.0}), InvalidInput);
}

TEST_CASE("grids") {
  const auto lin = tau_grid(-2.0, 2.0, 5, GridSpacing::linear);
  CHECK(lin == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
  const auto lg = tau_grid(-400.0, 400.0, 3, GridSpacing::log);
  CHECK(lg[0] == 1.0);
  CHECK(lg[1] == doctest::Approx(20.0));
  CHECK(lg[2] == 400.0);
  CHECK(tau_grid(10.0, 1000.0, 3, GridSpacing::log)[1] == doctest::Approx(100.0));
  CHECK_THROWS_AS(tau_grid(-5.0, 0.5, 3, GridSpacing::log), InvalidInput);
  CHECK_THROWS_AS(tau_grid(1.0, 0.0, 3, GridSpacing::linear), InvalidInput);
}

TEST_CASE("trajectory CSV layout") {
  std::ostringstream out;
  CVector s(2);
  s << Complex(0.6, 0.0), Complex(0.0, -0.8);
  write_trajectory_csv(out, {1.5}, {s});
  CHECK(out.str() ==
        "tau,re_c1,im_c1,re_c2,im_c2,P1,P2\n"
        "1.5,6.000000000000e-01,0.000000000000e+00,0.000000000000e+00,-8.000000000000e-01,"
        "3.600000000000e-01,6.400000000000e-01\n");
}

TEST_CASE("invalid requests") {
  const auto h = linear_chirp(scalar(1.0));
  CHECK_THROWS_AS(integrate(h, CVector::Zero(2), 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(integrate(h, CVector::Unit(2, 0), 0.0, 1.0, with_tol(1e-3)), InvalidInput);
  CHECK_THROWS_AS(integrate(h, CVector::Unit(2, 0), 0.0, 1.0, with_tol(1e-13)), InvalidInput);
  CHECK_THROWS_AS(integrate(h, CVector::Unit(3, 0), 0.0, 1.0), InvalidInput);
}

TEST_CASE("step underflow on an absurdly stiff problem") {
  const HamiltonianFn stiff = [](double t) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1e15 * (1.0 + t);
    return m;
  };
  CHECK_THROWS_AS(integrate(stiff, CVector::Unit(2, 0), 0.0, 1.0), StepUnderflow);
}

TEST_CASE("AEH pulse shape") {
  CHECK_THROWS_AS(AehPulse(-1.0, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(AehPulse(1.0, -1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(AehPulse(1.0, 1.0, 0.0), InvalidInput);
  const AehPulse p(2.0, 3.0, 1.5);
  const CMatrix shape = scalar(1.0);
  const CMatrix h0 = aeh_hamiltonian(p, shape, 0.0);
  CHECK(std::abs(h0(0, 1) - 2.0) < 1e-15);
  CHECK(std::abs(h0(1, 1)) == 0.0);
  const CMatrix far = aeh_hamiltonian(p, shape, 200.0);
  CHECK(std::abs(far(0, 1)) < 1e-30);
  CHECK(std::abs(far(1, 1) - 3.0) < 1e-15);
  CHECK(std::abs(aeh_hamiltonian(p, shape, -200.0)(1, 1) + 3.0) < 1e-15);
  // the frame phase is an antiderivative of the detuning
  const auto blk = aeh_block(p, shape);
  const double t = 0.7, e = 1e-5;
  CHECK((blk.phase(t + e) - blk.phase(t - e)) / (2 * e) == doctest::Approx(blk.detuning(t)));
}

TEST_CASE("AEH-driven transition probabilities settle") {
  const double big_t = 1.0;
  const auto sub = build_subsystems(AtomicTransition(2, 1, 1.0, 1.0)).larger;
  const CMatrix shape = sub.v / sub.v.norm();
  const auto h = aeh_block(AehPulse(4.0, 2.0, big_t), shape);
  const CMatrix u20 = numeric_propagator(h, -20.0 * big_t, 20.0 * big_t);
  const CMatrix u40 = numeric_propagator(h, -20.0 * big_t, 40.0 * big_t);
  CHECK((u20.cwiseAbs2() - u40.cwiseAbs2()).cwiseAbs().maxCoeff() <= 1e-4);
}
