#include "busgate/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "busgate/parallel.hpp"

namespace busgate::protocols {

std::string to_string(Checkpoint c) { return c == Checkpoint::Optimized ? "optimized" : "formula"; }
std::string to_string(RepeatMode m) { return m == RepeatMode::Reprepare ? "reprepare" : "continuous"; }

Checkpoint parse_checkpoint(const std::string& s) {
  if (s == "optimized") return Checkpoint::Optimized;
  if (s == "formula") return Checkpoint::Formula;
  throw ConfigError("unknown checkpoint source '" + s + "' (expected optimized or formula)");
}

RepeatMode parse_repeat_mode(const std::string& s) {
  if (s == "reprepare") return RepeatMode::Reprepare;
  if (s == "continuous") return RepeatMode::Continuous;
  throw ConfigError("unknown repeat mode '" + s + "' (expected reprepare or continuous)");
}

OperatingPoint operating_point(int n, double j, Checkpoint source) {
  if (source == Checkpoint::Formula)
    return {optimal_coupling_estimate(n, j), transfer_time_estimate(n, j), source};
  const auto o = optimize(n, j);
  return {o.j0_opt, o.t_opt, source};
}

namespace {

maps::ProcessMap checked_map(const GateSnapshot& s, EngineKind engine) {
  auto m = s.process_map(to_string(engine));
  const auto inv = maps::check_invariants(m);
  if (!inv.ok())
    throw NumericalError("process map at t=" + std::to_string(s.t) +
                         " violates channel invariants (hermiticity " + std::to_string(inv.hermiticity) +
                         ", trace " + std::to_string(inv.trace) + ", choi min " + std::to_string(inv.choi_min) +
                         ")");
  return m;
}

double clamp_fidelity(double f) {
  if (f < -1e-9 || f > 1.0 + 1e-9) throw NumericalError("fidelity " + std::to_string(f) + " outside [0, 1]");
  return std::clamp(f, 0.0, 1.0);
}

Mat4 matrix_power(const Mat4& g, int k) {
  Mat4 r = Mat4::Identity();
  for (int i = 0; i < k; ++i) r = g * r;
  return r;
}

std::optional<cplx> measured_transfer(const ValidatedSpec& vs, const EngineOptions& opt, double j0, double t) {
  if (vs.layout.has_outer()) return std::nullopt;
  if (vs.spec.lambda == 0.0) return ffq::transfer_amplitude(vs, j0, t);
  if (vs.layout.total_sites > opt.site_cap) return std::nullopt;
  return mbq::transfer_amplitude(vs, j0, t, opt.site_cap);
}

ValidatedSpec bus_only(const ChainSpec& spec) {
  ChainSpec s = spec;
  s.extra_left = s.extra_right = 0;
  s.cut_fields.clear();
  return validate_spec(s);
}

}  // namespace

double gate_fidelity(const GateSnapshot& s, const IdealGate& gate, EngineKind engine) {
  return clamp_fidelity(maps::average_gate_fidelity(checked_map(s, engine), gate));
}

GateRunResult run_gate(const ChainSpec& spec, const EngineOptions& options, double j0,
                       const std::vector<double>& times, const std::vector<double>& checkpoints, double t_star) {
  ChainSpec s = spec;
  s.j0 = j0;
  const auto vs = validate_spec(s);
  std::vector<double> all = times;
  all.insert(all.end(), checkpoints.begin(), checkpoints.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const double horizon = all.empty() ? 0.0 : all.back();

  const auto sim = GateSimulator::create(vs, ControlSchedule::sudden(j0, horizon), options);
  const auto snaps = sim->run(all);
  std::map<double, const GateSnapshot*> at;
  for (const auto& sn : snaps) at[sn.t] = &sn;

  GateRunResult r;
  r.engine = sim->kind();
  r.parity_p = sim->parity_p();
  r.gate = ideal_gate(vs.spec.n_bus, r.parity_p);
  r.j0 = j0;
  r.t_star = t_star;
  r.times = times;
  r.f_g.resize(times.size());
  r.f_m.resize(times.size());
  const Vec4 pp = maps::plus_plus();
  parallel_for(times.size(), [&](std::size_t n) {
    const auto& sn = *at.at(times[n]);
    r.f_g[n] = gate_fidelity(sn, r.gate, r.engine);
    r.f_m[n] = clamp_fidelity(sn.bus_fidelity(pp));
  });
  for (double t : checkpoints) {
    r.checkpoint_times.push_back(t);
    r.checkpoint_maps.push_back(checked_map(*at.at(t), r.engine));
  }
  r.transfer = measured_transfer(vs, options, j0, t_star);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<RepeatRow> repeat_continuous(const ValidatedSpec& vs, const EngineOptions& opt, double j0,
                                         double t_star, int k_max) {
  std::vector<double> times;
  for (int k = 1; k <= k_max; ++k) times.push_back(k * t_star);
  const auto sim = GateSimulator::create(vs, ControlSchedule::sudden(j0, k_max * t_star), opt);
  const auto snaps = sim->run(times);
  const auto gate = ideal_gate(vs.spec.n_bus, sim->parity_p());
  const Mat4 g = gate.matrix();
  std::vector<RepeatRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    const auto& sn = snaps[k - 1];
    const auto m = checked_map(sn, sim->kind());
    rows.push_back({k, clamp_fidelity(maps::average_gate_fidelity(m, matrix_power(g, k))),
                    clamp_fidelity(sn.bus_fidelity(maps::plus_plus()))});
  }
  return rows;
}

// Bus carried over between uses as a mixed state; qubits reset to |++>.
std::vector<RepeatRow> repeat_reprepare(const ValidatedSpec& vs, const EngineOptions& opt, double j0,
                                        double t_star, int k_max) {
  if (vs.layout.has_outer()) throw ConfigError("repeat with re-preparation needs a bus without outer segments");
  if (vs.layout.total_sites > opt.site_cap)
    throw ConfigError("repeat with re-preparation runs on mbq; " + std::to_string(vs.layout.total_sites) +
                      " sites exceed the cap of " + std::to_string(opt.site_cap));
  const auto& lay = vs.layout;
  const auto bus = lay.bus_sites();
  const auto ref = mbq::bus_ground_state(vs, opt.zero_mode, opt.site_cap);
  const auto gate = ideal_gate(vs.spec.n_bus, ref.parity_p);
  const Vec4 pp = maps::plus_plus();

  ControlSchedule sched = ControlSchedule::sudden(j0, t_star);
  const mbq::SectorPropagator prop(mbq::ManyBodyHamiltonian::at(vs, sched, 0.0, opt.site_cap), t_star);

  DenseEnsemble env{{1.0, ref.vector}};
  std::vector<RepeatRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    GateSnapshot sn;
    sn.t = k * t_star;
    const auto dim = Eigen::Index{1} << bus.size();
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (const auto& [w, phi] : env) {
      std::array<mbq::DenseState, 4> psi;
      for (int x = 0; x < 4; ++x) {
        Vec4 c = Vec4::Zero();
        c(x) = 1.0;
        psi[x] = prop.apply(mbq::product_state(lay, c, phi));
      }
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) sn.kernel[y][x] += w * mbq::pair_kernel(psi[y], psi[x], lay);
      std::array<CVector, 4> proj;
      for (int x = 0; x < 4; ++x) proj[x] = mbq::project_block(psi[x], bus, ref.vector);
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) sn.bus_gram(y, x) += w * proj[y].dot(proj[x]);
      mbq::DenseState out{psi[0].sites, CVector::Zero(psi[0].amplitudes.size())};
      for (int x = 0; x < 4; ++x) out.amplitudes += pp(x) * psi[x].amplitudes;
      rho += w * mbq::reduced_block(out, bus);
    }
    const auto m = checked_map(sn, EngineKind::Mbq);
    rows.push_back({k, clamp_fidelity(maps::average_gate_fidelity(m, gate)), clamp_fidelity(sn.bus_fidelity(pp))});

    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
    const double top = es.eigenvalues().maxCoeff();
    env.clear();
    double total = 0.0;
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
      const double w = es.eigenvalues()(i);
      if (w <= 1e-13 * top) continue;
      env.emplace_back(w, es.eigenvectors().col(i));
      total += w;
    }
    for (auto& [w, v] : env) w /= total;
  }
  return rows;
}

}  // namespace

std::vector<RepeatRow> run_repeated(const ChainSpec& spec, const EngineOptions& options, double j0, double t_star,
                                    int k_max, RepeatMode mode) {
  if (k_max < 1) throw ConfigError("k_max >= 1 required");
  if (!(t_star > 0.0)) throw ConfigError("t_star > 0 required");
  ChainSpec s = spec;
  s.j0 = j0;
  const auto vs = validate_spec(s);
  if (mode == RepeatMode::Continuous) return repeat_continuous(vs, options, j0, t_star, k_max);
  if (options.engine == EngineKind::Ffq) throw ConfigError("repeat with re-preparation requires the mbq engine");
  return repeat_reprepare(vs, options, j0, t_star, k_max);
}

// ---------------------------------------------------------------------------

double run_gradual(const ChainSpec& spec, const EngineOptions& options, double j0, double t_star, double tau,
                   bool retime) {
  if (!(tau >= 0.0)) throw ConfigError("tau >= 0 required");
  ChainSpec s = spec;
  s.j0 = j0;
  const auto vs = validate_spec(s);
  ControlSchedule sched;
  sched.j0_profile = PiecewiseLinear::ramp(0.0, 0.0, tau, j0);
  std::vector<double> times{t_star};
  if (retime && tau > 0.0) {
    const int steps = std::max(1, static_cast<int>(std::ceil(tau / 0.01)));
    for (int i = 1; i <= steps; ++i) times.push_back(t_star + tau * i / steps);
  }
  sched.horizon = times.back();
  const auto sim = GateSimulator::create(vs, sched, options);
  const auto gate = ideal_gate(vs.spec.n_bus, sim->parity_p());
  double best = 0.0;
  for (const auto& sn : sim->run(times)) best = std::max(best, gate_fidelity(sn, gate, sim->kind()));
  return best;
}

std::vector<std::pair<double, double>> sweep_gradual(const ChainSpec& spec, const EngineOptions& options,
                                                     double j0, double t_star, const std::vector<double>& taus,
                                                     bool retime) {
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t i) {
    out[i] = {sorted[i], run_gradual(spec, options, j0, t_star, sorted[i], retime)};
  });
  return out;
}

// ---------------------------------------------------------------------------

ValidatedSpec cut_geometry(const ChainSpec& bus_spec, int outer) {
  if (outer < 1) throw ConfigError("cut geometry needs outer segments of length >= 1");
  ChainSpec s = bus_spec;
  s.extra_left = s.extra_right = outer;
  s.cut_fields.clear();
  auto vs = validate_spec(s);
  const auto& lay = vs.layout;
  s.cut_fields = {{lay.qubit_a - 1, 0.0}, {lay.qubit_b + 1, 0.0}};
  return validate_spec(s);
}

namespace {

std::pair<int, int> cut_sites(const Layout& lay) { return {lay.qubit_a - 1, lay.qubit_b + 1}; }

ControlSchedule cut_schedule(const ValidatedSpec& vs, const CutOptions& o, bool glue) {
  ControlSchedule sched;
  const double e = o.delta_e * vs.spec.j;
  PiecewiseLinear prof = PiecewiseLinear::ramp(0.0, 0.0, o.ramp_time, e);
  if (glue && o.glue_time > 0.0) {
    std::vector<std::pair<double, double>> k{{0.0, 0.0}, {o.ramp_time, e}, {o.ramp_time + o.glue_time, 0.0}};
    if (!(o.ramp_time > 0.0)) k.erase(k.begin());
    prof = PiecewiseLinear(k);
  }
  const auto [l, r] = cut_sites(vs.layout);
  sched.field_profiles[l] = prof;
  sched.field_profiles[r] = prof;
  sched.horizon = o.ramp_time + (glue ? o.glue_time : 0.0);
  return sched;
}

void check_cut_options(const CutOptions& o) {
  if (!(o.delta_e >= 0.0)) throw ConfigError("delta_e >= 0 required");
  if (!(o.ramp_time >= 0.0) || !(o.glue_time >= 0.0)) throw ConfigError("ramp and glue times must be >= 0");
  if (!(o.sample_dt > 0.0)) throw ConfigError("sample_dt > 0 required");
}

CMatrix rows_of(const CMatrix& m, const std::vector<int>& rows) {
  CMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace

CutRunResult run_cut_glue(const ChainSpec& bus_spec, const CutOptions& o, const ffq::PropagationOptions& prop) {
  check_cut_options(o);
  if (bus_spec.lambda != 0.0) throw ConfigError("the cut protocol runs on ffq, which requires lambda = 0");
  ChainSpec s = bus_spec;
  s.j0 = 0.0;
  const auto vs = cut_geometry(s, o.outer);
  const auto sched = cut_schedule(vs, o, true);
  const auto bus = vs.layout.bus_sites();

  const auto ref_bus = rows_of(ffq::bus_ground_state(vs).orbitals, bus);
  const auto lattice_gs = ffq::lattice_ground_state(vs, sched, 0.0);
  auto f_cut = [&](const ffq::SlaterDeterminant& d) { return clamp_fidelity(ffq::block_fidelity(d, bus, ref_bus)); };
  auto f_glue = [&](const ffq::SlaterDeterminant& d) { return clamp_fidelity(std::norm(ffq::overlap(lattice_gs, d))); };

  std::vector<double> grid;
  const double end = sched.horizon;
  const int steps = std::max(1, static_cast<int>(std::ceil(end / o.sample_dt - 1e-9)));
  for (int i = 0; i <= steps; ++i) grid.push_back(std::min(end, i * o.sample_dt));
  if (o.ramp_time > 0.0 && std::find(grid.begin(), grid.end(), o.ramp_time) == grid.end()) grid.push_back(o.ramp_time);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  CutRunResult r;
  ffq::SlaterDeterminant psi = lattice_gs;
  r.final_cut_state = psi;
  double prev = 0.0;
  for (double t : grid) {
    if (t > prev) {
      psi.orbitals = ffq::propagator(vs, sched, prev, t, prop) * psi.orbitals;
      prev = t;
    }
    r.times.push_back(t);
    r.f_cut.push_back(f_cut(psi));
    r.f_glue.push_back(f_glue(psi));
    if (t == o.ramp_time) {
      r.final_cut_state = psi;
      r.f_cut_end = r.f_cut.back();
    }
  }
  r.f_cut_start = r.f_cut.front();
  r.f_glue_end = r.f_glue.back();
  return r;
}

PostCutGate run_post_cut_gate(const ChainSpec& bus_spec, const CutOptions& o, double j0, double t_star,
                              const EngineOptions& eopt) {
  CutOptions cut = o;
  cut.glue_time = 0.0;
  cut.sample_dt = std::max(o.ramp_time, 1e-3);
  const auto cr = run_cut_glue(bus_spec, cut);

  ChainSpec s = bus_spec;
  s.j0 = j0;
  const auto vs = cut_geometry(s, o.outer);
  if (eopt.engine == EngineKind::Ffq)
    throw ConfigError("a gate with outer segments attached needs the mbq engine");
  resolve_engine(EngineKind::Mbq, vs, eopt.site_cap);

  ControlSchedule sched = ControlSchedule::sudden(j0, t_star);
  const auto [l, r] = cut_sites(vs.layout);
  sched.field_profiles[l] = PiecewiseLinear::constant(o.delta_e * vs.spec.j);
  sched.field_profiles[r] = PiecewiseLinear::constant(o.delta_e * vs.spec.j);

  const auto env = mbq::dense_from_slater(cr.final_cut_state, vs.layout.lattice_sites());
  const int p = ffq::bus_ground_state(vs).parity_p;
  const auto sim = GateSimulator::create_mbq(vs, sched, {{1.0, env}}, p, eopt);
  const auto snap = sim->run({t_star}).front();

  PostCutGate g;
  g.delta_e = o.delta_e;
  g.n_bus = vs.spec.n_bus;
  g.f_g = gate_fidelity(snap, ideal_gate(vs.spec.n_bus, p), EngineKind::Mbq);
  g.f_g_isolated = run_gate(bus_only(s).spec, eopt, j0, {t_star}, {}, t_star).f_g.front();
  return g;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> sweep_lambda(const ChainSpec& spec, const EngineOptions& options, double j0,
                                                    double t_star, const std::vector<double>& lambdas) {
  if (options.engine == EngineKind::Ffq) throw ConfigError("a lambda sweep needs the mbq engine");
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  EngineOptions opt = options;
  opt.engine = EngineKind::Mbq;
  std::vector<std::pair<double, double>> out(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t i) {
    ChainSpec s = spec;
    s.lambda = sorted[i];
    out[i] = {sorted[i], run_gate(s, opt, j0, {t_star}, {}, t_star).f_g.front()};
  });
  return out;
}

}  // namespace busgate::protocols
