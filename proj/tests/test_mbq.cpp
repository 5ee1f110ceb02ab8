#include <doctest.h>

#include <random>

#include "busgate/krylov.hpp"
#include "busgate/mbq.hpp"
#include "dense_oracle.hpp"

using namespace busgate;

namespace {

ValidatedSpec bus(int n, double lambda = 0.0) {
  ChainSpec s;
  s.n_bus = n;
  s.lambda = lambda;
  return validate_spec(s);
}

CVector random_vector(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("two-site ground energies") {
  // Singlet: <XX + YY> = -2, <ZZ> = -1.
  CHECK(mbq::bus_ground_state(bus(2)).energy == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(mbq::bus_ground_state(bus(2, 0.2)).energy == doctest::Approx(-2.2).epsilon(1e-12));
}

TEST_CASE("matrix-free Hamiltonian against brute force") {
  std::mt19937 rng(5);
  const std::vector<double> c{0.4, 1.0, 1.3, 0.7};
  const std::vector<double> h{0.2, 0.0, -0.5, 1.1, 0.3};
  std::vector<mbq::SpinBond> bonds;
  for (int i = 0; i < 4; ++i) bonds.push_back({i, i + 1, c[i]});
  const mbq::ManyBodyHamiltonian ham(5, bonds, h, 0.35);
  const CMatrix ref = oracle::xxz_chain(c, 0.35, h);
  const CVector x = random_vector(32, rng);
  CVector y(32);
  ham.apply(x, y);
  CHECK((y - ref * x).norm() < 1e-12);
}

TEST_CASE("Krylov exponential against dense exponential") {
  std::mt19937 rng(9);
  const CMatrix h = oracle::xxz_chain({1.0, 0.8, 1.0, 1.2, 1.0, 0.9, 1.0}, 0.3, {0.1, 0, 0, 0.4, 0, 0, 0, -0.2});
  const CVector v = random_vector(h.rows(), rng);
  krylov::MatVec mv = [&](const CVector& x, CVector& y) { y = h * x; };
  for (double t : {0.1, 2.5, 9.0}) {
    const CVector k = krylov::expmv(mv, v, t);
    CHECK((k - oracle::expm_hermitian(h, t) * v).norm() < 1e-9);
  }
}

TEST_CASE("Lanczos ground state against dense diagonalization") {
  std::mt19937 rng(13);
  const std::vector<double> c(9, 1.0);
  const CMatrix h = oracle::xxz_chain(c, 0.5);
  krylov::MatVec mv = [&](const CVector& x, CVector& y) { y = h * x; };
  krylov::EigenOptions o;
  o.dense_threshold = 0;
  o.basis = 40;
  const auto e = krylov::lowest_eigenpair(mv, random_vector(h.rows(), rng), o);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CHECK(e.value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
  CHECK(e.residual < 1e-10);
}

TEST_CASE("sector ground state and parity") {
  const auto gs = mbq::bus_ground_state(bus(8));
  CHECK(gs.particles == 4);
  CHECK(gs.parity_p == 4);
  CHECK(gs.residual < 1e-9);
  CHECK_THROWS_AS(mbq::bus_ground_state(bus(5)), ConfigError);
  CHECK(mbq::bus_ground_state(bus(5), ZeroModePolicy::Occupy).particles == 3);
  CHECK(mbq::bus_ground_state(bus(5), ZeroModePolicy::Leave).particles == 2);
}

TEST_CASE("dense evolution of the full layout") {
  std::mt19937 rng(21);
  ChainSpec s;
  s.n_bus = 3;
  s.lambda = 0.15;
  const auto vs = validate_spec(s);
  ControlSchedule c = ControlSchedule::sudden(0.6);
  mbq::DenseState st{5, random_vector(32, rng)};
  const auto out = mbq::evolve(st, vs, c, 0.0, 1.7);
  const CMatrix h = oracle::xxz_chain({0.6, 1.0, 1.0, 0.6}, 0.15);
  CHECK((out.amplitudes - oracle::expm_hermitian(h, 1.7) * st.amplitudes).norm() < 1e-9);

  const mbq::SectorPropagator prop(mbq::ManyBodyHamiltonian::at(vs, c, 0.0), 1.7);
  CHECK((prop.apply(st).amplitudes - out.amplitudes).norm() < 1e-9);
}

TEST_CASE("dense ramp evolution converges to a fine reference") {
  ChainSpec s;
  s.n_bus = 2;
  const auto vs = validate_spec(s);
  ControlSchedule c;
  c.j0_profile = PiecewiseLinear::ramp(0.0, 0.0, 1.5, 0.9);
  CVector v = CVector::Zero(16);
  v(0b1001) = 1.0;
  const auto out = mbq::evolve({4, v}, vs, c, 0.0, 1.5);
  // Reference: midpoint products with a very small step.
  CVector ref = v;
  const int steps = 20000;
  const double h = 1.5 / steps;
  for (int k = 0; k < steps; ++k) {
    const double j0 = 0.9 * (k + 0.5) * h / 1.5;
    ref = oracle::expm_hermitian(oracle::xxz_chain({j0, 1.0, j0}, 0.0), h) * ref;
  }
  CHECK((out.amplitudes - ref).norm() < 1e-7);
}

TEST_CASE("block reductions") {
  const auto vs = bus(4);
  const auto gs = mbq::bus_ground_state(vs);
  Vec4 c = Vec4::Zero();
  c(1) = 1.0;
  const auto st = mbq::product_state_bus(vs.layout, c, gs.vector);
  CHECK(mbq::bus_overlap_fidelity(st, gs.vector, vs.layout) == doctest::Approx(1.0).epsilon(1e-12));
  const Mat4 rho = mbq::reduced_two_qubit(st, vs.layout);
  CHECK(std::abs(rho(1, 1) - 1.0) < 1e-12);
  const CMatrix rb = mbq::reduced_block(st, vs.layout.bus_sites());
  CHECK(std::abs(rb.trace() - 1.0) < 1e-12);
  CHECK(std::abs(mbq::bus_parity(st, vs.layout)) == doctest::Approx(1.0).epsilon(1e-12));
}
