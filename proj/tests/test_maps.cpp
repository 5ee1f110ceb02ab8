#include <doctest.h>

#include <random>

#include "busgate/maps.hpp"
#include "dense_oracle.hpp"

using namespace busgate;

TEST_CASE("identity and depolarizing channels") {
  const auto g = ideal_gate(8, 4);
  const cplx tr = g.matrix().trace();
  CHECK(maps::average_gate_fidelity(maps::identity_channel(), Mat4::Identity()) == doctest::Approx(1.0));
  CHECK(maps::average_gate_fidelity(maps::identity_channel(), g) == doctest::Approx((std::norm(tr) + 4.0) / 20.0));
  CHECK(maps::average_gate_fidelity(maps::depolarizing_channel(), g) == doctest::Approx(0.25));
  CHECK(maps::check_invariants(maps::depolarizing_channel()).ok());
}

TEST_CASE("unitary channel fidelity closed form") {
  std::mt19937 rng(17);
  for (int n = 0; n < 100; ++n) {
    const Mat4 v = oracle::random_unitary4(rng);
    const Mat4 g = oracle::random_unitary4(rng);
    const double expect = (std::norm((g.adjoint() * v).trace()) + 4.0) / 20.0;
    CHECK(std::abs(maps::average_gate_fidelity(maps::unitary_channel(v), g) - expect) < 1e-12);
  }
}

TEST_CASE("unitary channel structure") {
  std::mt19937 rng(19);
  const Mat4 u = oracle::random_unitary4(rng), v = oracle::random_unitary4(rng);
  const auto cu = maps::unitary_channel(u);
  CHECK((maps::compose(cu, maps::unitary_channel(v)).e - maps::unitary_channel(u * v).e).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<maps::Mat16> es(maps::choi(cu));
  CHECK(es.eigenvalues()(15) == doctest::Approx(4.0));
  CHECK(std::abs(es.eigenvalues().head(15).sum()) < 1e-12);
  CHECK((maps::unitary_channel(Mat4::Identity()).e - maps::identity_channel().e).norm() < 1e-14);
  Mat4 bad = u;
  bad(0, 0) += 0.1;
  CHECK_THROWS_AS(maps::unitary_channel(bad), ConfigError);
}

TEST_CASE("tomography reassembles a known channel") {
  std::mt19937 rng(23);
  const Mat4 u = oracle::random_unitary4(rng);
  const auto inputs = maps::tomography_inputs();
  REQUIRE(inputs.size() == 16);
  std::array<Mat4, 16> outs;
  for (int k = 0; k < 16; ++k) outs[k] = u * maps::projector(inputs[k].state) * u.adjoint();
  const auto m = maps::assemble_process_map(outs, 0.0);
  CHECK((m.e - maps::unitary_channel(u).e).norm() < 1e-12);
  const auto inv = maps::check_invariants(m);
  CHECK(inv.hermiticity < 1e-13);
  CHECK(inv.trace < 1e-13);
  CHECK(inv.choi_min > -1e-12);

  outs[3] *= 2.0;
  CHECK_THROWS_AS(maps::assemble_process_map(outs, 0.0), NumericalError);
}

TEST_CASE("concurrence") {
  Vec4 bell = Vec4::Zero();
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(maps::concurrence(maps::projector(bell)) == doctest::Approx(1.0));
  CHECK(maps::concurrence(maps::projector(maps::plus_plus())) < 1e-8);  // sqrt of round-off eigenvalues
  CHECK(maps::concurrence(Mat4::Identity() / 4.0) == doctest::Approx(0.0));
  for (int n : {8, 9, 16}) {
    const Mat4 g = ideal_gate(n, n / 2).matrix();
    const Vec4 out = g * maps::plus_plus();
    CHECK(std::abs(maps::concurrence(maps::projector(out)) - 1.0) < 1e-7);
  }
}
