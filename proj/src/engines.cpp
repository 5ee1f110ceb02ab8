#include "busgate/engines.hpp"

#include <algorithm>
#include <string>

#include "busgate/parallel.hpp"

namespace busgate {

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::Auto: return "auto";
    case EngineKind::Ffq: return "ffq";
    case EngineKind::Mbq: return "mbq";
  }
  return "auto";
}

EngineKind parse_engine(const std::string& name) {
  if (name == "auto") return EngineKind::Auto;
  if (name == "ffq") return EngineKind::Ffq;
  if (name == "mbq") return EngineKind::Mbq;
  throw ConfigError("unknown engine '" + name + "' (expected auto, ffq or mbq)");
}

EngineKind resolve_engine(EngineKind requested, const ValidatedSpec& vs, int site_cap) {
  const int sites = vs.layout.total_sites;
  auto check_cap = [&] {
    if (sites > site_cap)
      throw ConfigError("mbq: " + std::to_string(sites) + " sites exceed the cap of " + std::to_string(site_cap));
  };
  switch (requested) {
    case EngineKind::Ffq:
      if (vs.spec.lambda != 0.0) throw ConfigError("ffq requires λ=0");
      if (vs.layout.has_outer()) throw ConfigError("ffq cannot run a gate with outer segments attached");
      return EngineKind::Ffq;
    case EngineKind::Mbq: check_cap(); return EngineKind::Mbq;
    case EngineKind::Auto:
      if (vs.spec.lambda == 0.0 && !vs.layout.has_outer()) return EngineKind::Ffq;
      check_cap();
      return EngineKind::Mbq;
  }
  return EngineKind::Ffq;
}

// ---------------------------------------------------------------------------

Mat4 GateSnapshot::rdm(const Vec4& c) const {
  Mat4 r = Mat4::Zero();
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      if (c(y) != 0.0 && c(x) != 0.0) r += std::conj(c(y)) * c(x) * kernel[y][x];
  return r;
}

double GateSnapshot::bus_fidelity(const Vec4& c) const { return std::real(c.dot(bus_gram * c)); }

maps::ProcessMap GateSnapshot::process_map(const std::string& engine) const {
  const auto inputs = maps::tomography_inputs();
  std::array<Mat4, 16> outs;
  for (int n = 0; n < 16; ++n) outs[n] = rdm(inputs[n].state);
  return maps::assemble_process_map(outs, t, engine);
}

namespace {

std::vector<double> sorted_times(std::vector<double> times) {
  for (double t : times)
    if (!(t >= 0.0)) throw ConfigError("snapshot times must be >= 0");
  std::sort(times.begin(), times.end());
  return times;
}

class FfqSimulator final : public GateSimulator {
 public:
  FfqSimulator(ValidatedSpec vs, ControlSchedule schedule, CMatrix env, int parity, EngineOptions opt)
      : vs_(std::move(vs)), schedule_(std::move(schedule)), env_(std::move(env)), parity_(parity),
        opt_(std::move(opt)) {
    resolve_engine(EngineKind::Ffq, vs_, opt_.site_cap);
    if (env_.rows() != vs_.layout.total_sites) throw ConfigError("ffq environment has the wrong number of rows");
    ref_ = ffq::bus_ground_state(vs_, opt_.zero_mode).orbitals;
  }

  EngineKind kind() const override { return EngineKind::Ffq; }
  int parity_p() const override { return parity_; }

  std::vector<GateSnapshot> run(const std::vector<double>& raw) const override {
    const auto times = sorted_times(raw);
    const auto& lay = vs_.layout;
    std::array<ffq::SlaterDeterminant, 4> init, refs;
    for (int x = 0; x < 4; ++x) {
      init[x] = ffq::configuration_determinant(x, env_, lay);
      refs[x] = ffq::configuration_determinant(x, ref_, lay);
    }

    std::vector<CMatrix> props(times.size());
    const double tmax = times.empty() ? 0.0 : times.back();
    if (schedule_.constant_on(0.0, tmax)) {
      const auto eig = ffq::diagonalize(ffq::build_single_particle(vs_, schedule_, 0.0));
      for (std::size_t n = 0; n < times.size(); ++n) props[n] = ffq::propagator(eig, times[n]);
    } else {
      CMatrix u = CMatrix::Identity(lay.total_sites, lay.total_sites);
      double prev = 0.0;
      for (std::size_t n = 0; n < times.size(); ++n) {
        u = ffq::propagator(vs_, schedule_, prev, times[n], opt_.ffq) * u;
        prev = times[n];
        props[n] = u;
      }
    }

    std::vector<GateSnapshot> out(times.size());
    parallel_for(times.size(), [&](std::size_t n) {
      std::array<ffq::SlaterDeterminant, 4> psi;
      for (int x = 0; x < 4; ++x) psi[x].orbitals = props[n] * init[x].orbitals;
      GateSnapshot& s = out[n];
      s.t = times[n];
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) s.kernel[y][x] = ffq::pair_kernel(psi[y], psi[x], lay);
      Mat4 ov;  // ov(q, x) = <ref (x) q|psi_x>
      for (int q = 0; q < 4; ++q)
        for (int x = 0; x < 4; ++x) ov(q, x) = ffq::overlap(refs[q], psi[x]);
      s.bus_gram = ov.adjoint() * ov;
    });
    return out;
  }

 private:
  ValidatedSpec vs_;
  ControlSchedule schedule_;
  CMatrix env_;
  int parity_;
  EngineOptions opt_;
  CMatrix ref_;
};

class MbqSimulator final : public GateSimulator {
 public:
  MbqSimulator(ValidatedSpec vs, ControlSchedule schedule, DenseEnsemble env, int parity, EngineOptions opt)
      : vs_(std::move(vs)), schedule_(std::move(schedule)), env_(std::move(env)), parity_(parity),
        opt_(std::move(opt)) {
    resolve_engine(EngineKind::Mbq, vs_, opt_.site_cap);
    opt_.mbq.site_cap = opt_.site_cap;
    const auto dim = Eigen::Index{1} << vs_.layout.lattice_sites().size();
    for (const auto& [w, v] : env_)
      if (v.size() != dim) throw ConfigError("mbq environment has the wrong dimension");
    ref_ = mbq::bus_ground_state(vs_, opt_.zero_mode, opt_.site_cap).vector;
  }

  EngineKind kind() const override { return EngineKind::Mbq; }
  int parity_p() const override { return parity_; }

  std::vector<GateSnapshot> run(const std::vector<double>& raw) const override {
    const auto times = sorted_times(raw);
    const auto& lay = vs_.layout;
    const auto bus = lay.bus_sites();
    std::vector<GateSnapshot> out(times.size());
    for (std::size_t n = 0; n < times.size(); ++n) out[n].t = times[n];

    for (const auto& [w, env] : env_) {
      std::array<mbq::DenseState, 4> psi;
      for (int x = 0; x < 4; ++x) {
        Vec4 c = Vec4::Zero();
        c(x) = 1.0;
        psi[x] = mbq::product_state(lay, c, env);
      }
      double prev = 0.0;
      for (std::size_t n = 0; n < times.size(); ++n) {
        for (int x = 0; x < 4; ++x) psi[x] = mbq::evolve(psi[x], vs_, schedule_, prev, times[n], opt_.mbq);
        prev = times[n];
        GateSnapshot& s = out[n];
        for (int y = 0; y < 4; ++y)
          for (int x = 0; x < 4; ++x) s.kernel[y][x] += w * mbq::pair_kernel(psi[y], psi[x], lay);
        std::array<CVector, 4> proj;
        for (int x = 0; x < 4; ++x) proj[x] = mbq::project_block(psi[x], bus, ref_);
        for (int y = 0; y < 4; ++y)
          for (int x = 0; x < 4; ++x) s.bus_gram(y, x) += w * proj[y].dot(proj[x]);
      }
    }
    return out;
  }

 private:
  ValidatedSpec vs_;
  ControlSchedule schedule_;
  DenseEnsemble env_;
  int parity_;
  EngineOptions opt_;
  CVector ref_;
};

}  // namespace

std::pair<CVector, int> mbq_bus_environment(const ValidatedSpec& vs, const EngineOptions& options) {
  const auto gs = mbq::bus_ground_state(vs, options.zero_mode, options.site_cap);
  const auto lattice = vs.layout.lattice_sites();
  const auto bus = vs.layout.bus_sites();
  // Position of each bus site inside the lattice register.
  const int nl = static_cast<int>(lattice.size());
  std::vector<int> pos;
  for (int s : bus) pos.push_back(static_cast<int>(std::find(lattice.begin(), lattice.end(), s) - lattice.begin()));
  CVector env = CVector::Zero(Eigen::Index{1} << nl);
  const int nb = static_cast<int>(bus.size());
  for (Eigen::Index r = 0; r < gs.vector.size(); ++r) {
    if (gs.vector(r) == 0.0) continue;
    Eigen::Index idx = 0;
    for (int p = 0; p < nb; ++p)
      if ((r >> (nb - 1 - p)) & 1) idx |= Eigen::Index{1} << (nl - 1 - pos[p]);
    env(idx) = gs.vector(r);
  }
  return {env, gs.parity_p};
}

std::unique_ptr<GateSimulator> GateSimulator::create(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                                     const EngineOptions& options) {
  if (resolve_engine(options.engine, vs, options.site_cap) == EngineKind::Ffq) {
    const auto gs = ffq::bus_ground_state(vs, options.zero_mode);
    return create_ffq(vs, schedule, gs.orbitals, gs.parity_p, options);
  }
  auto [env, p] = mbq_bus_environment(vs, options);
  return create_mbq(vs, schedule, {{1.0, std::move(env)}}, p, options);
}

std::unique_ptr<GateSimulator> GateSimulator::create_ffq(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                                         const CMatrix& environment, int parity_p,
                                                         const EngineOptions& options) {
  return std::make_unique<FfqSimulator>(vs, schedule, environment, parity_p, options);
}

std::unique_ptr<GateSimulator> GateSimulator::create_mbq(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                                         DenseEnsemble environment, int parity_p,
                                                         const EngineOptions& options) {
  return std::make_unique<MbqSimulator>(vs, schedule, std::move(environment), parity_p, options);
}

}  // namespace busgate
