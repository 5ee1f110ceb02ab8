#include <doctest.h>

#include <cmath>

#include "busgate/model.hpp"

using namespace busgate;

TEST_CASE("layout without outer segments") {
  ChainSpec s;
  s.n_bus = 4;
  const auto vs = validate_spec(s);
  const auto& l = vs.layout;
  CHECK(l.total_sites == 6);
  CHECK(l.qubit_a == 0);
  CHECK(l.bus_first == 1);
  CHECK(l.bus_last == 4);
  CHECK(l.qubit_b == 5);
  CHECK(l.bonds.size() == 5);
  CHECK_FALSE(l.has_outer());
  CHECK(l.lattice_sites() == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("outer bonds skip the side-coupled qubits") {
  ChainSpec s;
  s.n_bus = 3;
  s.extra_left = 2;
  s.extra_right = 1;
  const auto l = validate_spec(s).layout;
  CHECK(l.total_sites == 2 + 1 + 3 + 1 + 1);
  bool left_link = false, right_link = false;
  for (const auto& b : l.bonds) {
    if (b.kind == BondKind::Outer && b.left == 1 && b.right == l.bus_first) left_link = true;
    if (b.kind == BondKind::Outer && b.left == l.bus_last && b.right == l.outer_right_first) right_link = true;
    CHECK_FALSE((b.kind == BondKind::Outer && (b.left == l.qubit_a || b.right == l.qubit_a)));
  }
  CHECK(left_link);
  CHECK(right_link);
}

TEST_CASE("spec errors are collected") {
  ChainSpec s;
  s.n_bus = 0;
  s.j = -1.0;
  s.extra_left = -2;
  try {
    validate_spec(s);
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(e.violations().size() == 3);
  }
  ChainSpec c;
  c.n_bus = 4;
  c.cut_fields = {{2, 1.0}};
  CHECK_THROWS_AS(validate_spec(c), SpecError);
}

TEST_CASE("piecewise linear profiles") {
  const auto r = PiecewiseLinear::ramp(1.0, 0.0, 3.0, 2.0);
  CHECK(r(0.0) == 0.0);
  CHECK(r(2.0) == doctest::Approx(1.0));
  CHECK(r(5.0) == 2.0);
  CHECK(r.constant_on(3.0, 10.0));
  CHECK_FALSE(r.constant_on(0.0, 2.0));
  CHECK(r.breakpoints(0.0, 5.0) == std::vector<double>{1.0, 3.0});
  CHECK(PiecewiseLinear::ramp(0.0, 0.0, 0.0, 0.7).is_constant());
  CHECK_THROWS_AS(PiecewiseLinear({{1.0, 0.0}, {1.0, 1.0}}), ConfigError);
}

TEST_CASE("closed-form estimates") {
  CHECK(optimal_coupling_estimate(8) == doctest::Approx(1.05 * std::pow(8.0, -1.0 / 6.0)));
  CHECK(optimal_coupling_estimate(100) == doctest::Approx(0.4874).epsilon(1e-3));
  CHECK(transfer_time_estimate(100) == doctest::Approx(25.0 + 0.52 * std::cbrt(100.0)));
  CHECK(transfer_time_estimate(10, 2.0) == doctest::Approx(0.5 * transfer_time_estimate(10)));
}

TEST_CASE("ideal gate is a phased swap") {
  for (int n : {7, 8, 9, 16}) {
    for (int p = 0; p <= 3; ++p) {
      const auto g = ideal_gate(n, p);
      const Mat4 m = g.matrix();
      CHECK((m.adjoint() * m - Mat4::Identity()).norm() < 1e-14);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          CHECK(std::abs(m(two_qubit_index(b, a), two_qubit_index(a, b))) == doctest::Approx(1.0));
      for (double phi : g.phases) CHECK((phi > -kPi && phi <= kPi));
    }
  }
  // Odd N: -pi(N+1)/2 and +pi(N+1)/2 agree modulo 2 pi.
  CHECK(phase_distance(transfer_phase(9), kPi * 10 / 2) < 1e-12);
  CHECK(phase_distance(transfer_phase(8), -kPi / 2) < 1e-12);
}

TEST_CASE("magnus step controls") {
  ChainSpec s;
  s.n_bus = 2;
  const auto vs = validate_spec(s);
  ControlSchedule c;
  c.j0_profile = PiecewiseLinear::ramp(0.0, 0.0, 1.0, 1.0);
  const auto m = magnus_step(vs, c, 0.0, 1.0);
  // Weights sum to one over the two half-steps, so a linear profile averages to its midpoint.
  const int q = 0;  // first bond is the qubit A bond
  CHECK(0.5 * (m.early.couplings[q] + m.late.couplings[q]) == doctest::Approx(0.5));
  // The first exponential leans on the early Gauss node.
  CHECK(m.early.couplings[q] < m.late.couplings[q]);
}
