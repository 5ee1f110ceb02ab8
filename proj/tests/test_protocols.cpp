#include <doctest.h>

#include <cmath>

#include "busgate/optimize.hpp"
#include "busgate/protocols.hpp"

using namespace busgate;

namespace {

ChainSpec bus(int n) {
  ChainSpec s;
  s.n_bus = n;
  return s;
}

}  // namespace

TEST_CASE("optimizer finds the three-site perfect transfer") {
  OptimizeOptions o;
  o.j0_hi = 1.0;
  o.t_hi_factor = 1.6;  // the perfect time sits above the default window at n = 1
  o.allow_widen = false;
  const auto r = optimize(1, 1.0, o);
  CHECK(r.peak == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.j0_opt == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.t_opt == doctest::Approx(kPi / (2.0 * std::sqrt(2.0))).epsilon(1e-6));
}

TEST_CASE("optimizer at N = 8 and unit rescaling") {
  const auto a = optimize(8);
  CHECK(a.j0_opt == doctest::Approx(0.74).epsilon(0.05 / 0.74));
  CHECK(a.peak <= 1.0);
  const auto b = optimize(8, 2.0);
  CHECK(b.j0_opt == doctest::Approx(2.0 * a.j0_opt).epsilon(1e-9));
  CHECK(b.t_opt == doctest::Approx(0.5 * a.t_opt).epsilon(1e-9));
  const auto t = optimize_time(8, 1.0, a.j0_opt);
  CHECK(t.t_opt == doctest::Approx(a.t_opt).epsilon(1e-6));
}

TEST_CASE("scaling fit recovers synthetic laws") {
  std::vector<Optimum> opt;
  for (int n : {10, 20, 40, 80, 120, 200}) {
    Optimum o;
    o.n = n;
    o.j0_opt = 1.05 * std::pow(n, -1.0 / 6.0);
    o.t_opt = 0.25 * n + 0.52 * std::cbrt(n);
    opt.push_back(o);
  }
  const auto f = fit_scaling(opt);
  CHECK(f.prefactor == doctest::Approx(1.05).epsilon(1e-10));
  CHECK(f.exponent == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
  CHECK(f.a == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(f.b == doctest::Approx(0.52).epsilon(1e-10));
  opt.pop_back();
  CHECK_THROWS_AS(fit_scaling(opt), ConfigError);
}

TEST_CASE("gate run at t = 0 gives the identity-channel value") {
  const auto r = protocols::run_gate(bus(8), {}, 0.7, {0.0, 1.0}, {}, 3.4);
  const double tr = std::norm(r.gate.matrix().trace());
  CHECK(r.f_g[0] == doctest::Approx((tr + 4.0) / 20.0).epsilon(1e-12));
  CHECK(r.f_m[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.parity_p == 4);
  REQUIRE(r.transfer.has_value());
}

TEST_CASE("gradual switching tends to the sudden switch") {
  const double j0 = 0.73, ts = 3.43;
  const auto sudden = protocols::run_gate(bus(8), {}, j0, {ts}, {}, ts).f_g.front();
  CHECK(protocols::run_gradual(bus(8), {}, j0, ts, 0.0) == doctest::Approx(sudden).epsilon(1e-12));
  CHECK(std::abs(protocols::run_gradual(bus(8), {}, j0, ts, 1e-6) - sudden) < 1e-6);
  // Continuity in tau.
  const auto sw = protocols::sweep_gradual(bus(8), {}, j0, ts, {0.5, 0.6, 0.7});
  CHECK(std::abs(sw[0].second - sw[1].second) < 0.05);
  CHECK(std::abs(sw[1].second - sw[2].second) < 0.05);
}

TEST_CASE("repeat modes agree on the first use") {
  const double j0 = 0.7285, ts = 3.431;
  const auto a = protocols::run_repeated(bus(6), {}, j0, ts, 2, protocols::RepeatMode::Reprepare);
  const auto b = protocols::run_repeated(bus(6), {}, j0, ts, 2, protocols::RepeatMode::Continuous);
  CHECK(a[0].f_g == doctest::Approx(b[0].f_g).epsilon(1e-9));
  CHECK(a[0].f_m == doctest::Approx(b[0].f_m).epsilon(1e-9));
  EngineOptions ffq;
  ffq.engine = EngineKind::Ffq;
  CHECK_THROWS_AS(protocols::run_repeated(bus(6), ffq, j0, ts, 2, protocols::RepeatMode::Reprepare), ConfigError);
}

TEST_CASE("static cut: the lattice ground state does not move") {
  protocols::CutOptions o;
  o.delta_e = 0.0;
  o.ramp_time = 4.0;
  o.glue_time = 0.0;
  o.outer = 2;
  const auto r = protocols::run_cut_glue(bus(6), o);
  CHECK(r.f_cut_start < 1.0);
  CHECK(r.f_cut_end == doctest::Approx(r.f_cut_start).epsilon(1e-10));
  for (double f : r.f_glue) CHECK(f == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lambda sweep at zero matches ffq") {
  const double j0 = 0.73, ts = 3.43;
  const auto f0 = protocols::run_gate(bus(8), {}, j0, {ts}, {}, ts).f_g.front();
  const auto sw = protocols::sweep_lambda(bus(8), {}, j0, ts, {0.0, 1e-3});
  CHECK(sw[0].second == doctest::Approx(f0).epsilon(1e-9));
  CHECK(std::abs(sw[1].second - f0) < 1e-3);
}
