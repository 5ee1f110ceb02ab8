#include "busgate/ffq.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "busgate/parallel.hpp"

namespace busgate::ffq {

namespace {

constexpr double kZeroModeTolerance = 1e-9;

CMatrix expm_real_symmetric(const RMatrix& h, double tau) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("single-particle eigensolver failed");
  const RMatrix& v = es.eigenvectors();
  CVector ph(v.cols());
  for (Eigen::Index k = 0; k < v.cols(); ++k) ph(k) = std::polar(1.0, -es.eigenvalues()(k) * tau);
  return v.cast<cplx>() * ph.asDiagonal() * v.transpose().cast<cplx>();
}

CMatrix cfm4_segment(const ValidatedSpec& vs, const ControlSchedule& schedule, double a, double b, long steps,
                     int reortho_every) {
  const double h = (b - a) / static_cast<double>(steps);
  const int n = vs.layout.total_sites;
  CMatrix u = CMatrix::Identity(n, n);
  for (long s = 0; s < steps; ++s) {
    const auto ms = magnus_step(vs, schedule, a + s * h, h);
    const CMatrix e1 = expm_real_symmetric(build_single_particle(vs, ms.early).matrix, 0.5 * h);
    const CMatrix e2 = expm_real_symmetric(build_single_particle(vs, ms.late).matrix, 0.5 * h);
    u = e2 * (e1 * u);
    if (reortho_every > 0 && (s + 1) % reortho_every == 0) reorthonormalize(u);
  }
  return u;
}

CMatrix ramp_propagator(const ValidatedSpec& vs, const ControlSchedule& schedule, double a, double b,
                        const PropagationOptions& opt) {
  if (!(opt.initial_step > 0.0)) throw ConfigError("propagation step must be positive");
  long steps = std::max(1L, static_cast<long>(std::ceil((b - a) / opt.initial_step - 1e-9)));
  CMatrix prev = cfm4_segment(vs, schedule, a, b, steps, opt.reorthonormalize_every);
  double change = 0.0;
  for (int k = 0; k < opt.max_halvings; ++k) {
    steps *= 2;
    CMatrix cur = cfm4_segment(vs, schedule, a, b, steps, opt.reorthonormalize_every);
    change = (cur - prev).cwiseAbs().maxCoeff();
    if (std::getenv("BG_DEBUG")) fprintf(stderr, "steps %ld change %g\n", steps, change);
    if (change < opt.tolerance) return cur;
    prev = std::move(cur);
  }
  throw NumericalError("ramp propagation did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                       "]: last change " + std::to_string(change));
}

CMatrix embed_columns(const RMatrix& block_modes, const std::vector<int>& rows, int total_sites,
                      const std::vector<int>& cols) {
  CMatrix out = CMatrix::Zero(total_sites, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r) out(rows[r], c) = block_modes(r, cols[c]);
  return out;
}

// Occupied columns of a spectrum under the zero-mode policy.
std::vector<int> fermi_sea(const RVector& omegas, ZeroModePolicy policy, const char* what) {
  std::vector<int> occ;
  for (Eigen::Index k = 0; k < omegas.size(); ++k) {
    const double w = omegas(k);
    if (std::abs(w) < kZeroModeTolerance) {
      if (policy == ZeroModePolicy::Reject)
        throw ConfigError(std::string(what) +
                          " has a zero-energy mode; choose an occupancy for it explicitly (odd bus length)");
      if (policy == ZeroModePolicy::Occupy) occ.push_back(static_cast<int>(k));
    } else if (w < 0.0) {
      occ.push_back(static_cast<int>(k));
    }
  }
  return occ;
}

}  // namespace

// ---------------------------------------------------------------------------

SingleParticleHamiltonian build_single_particle(const ValidatedSpec& vs, const InstantControls& controls) {
  const auto& lay = vs.layout;
  RMatrix h = RMatrix::Zero(lay.total_sites, lay.total_sites);
  for (std::size_t i = 0; i < lay.bonds.size(); ++i) {
    const auto& b = lay.bonds[i];
    h(b.left, b.right) += kHoppingFactor * controls.couplings[i];
    h(b.right, b.left) += kHoppingFactor * controls.couplings[i];
  }
  for (int s = 0; s < lay.total_sites; ++s) h(s, s) += kFieldFactor * controls.fields[s];
  return {h};
}

SingleParticleHamiltonian build_single_particle(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                                double t) {
  return build_single_particle(vs, controls_at(vs, schedule, t));
}

SingleParticleEigensystem diagonalize(const SingleParticleHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h.matrix);
  if (es.info() != Eigen::Success) throw NumericalError("single-particle eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix propagator(const SingleParticleEigensystem& eig, double t) {
  CVector ph(eig.omegas.size());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::polar(1.0, -eig.omegas(k) * t);
  const CMatrix g = eig.modes.cast<cplx>();
  return g * ph.asDiagonal() * g.transpose();
}

CMatrix propagator(const ValidatedSpec& vs, const ControlSchedule& schedule, double t0, double t1,
                   const PropagationOptions& options) {
  if (t1 < t0) throw ConfigError("propagation requires t1 >= t0");
  const int n = vs.layout.total_sites;
  CMatrix u = CMatrix::Identity(n, n);
  std::vector<double> cuts{t0};
  for (double b : schedule.breakpoints(t0, t1)) cuts.push_back(b);
  cuts.push_back(t1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    if (schedule.constant_on(a, b))
      u = propagator(diagonalize(build_single_particle(vs, schedule, 0.5 * (a + b))), b - a) * u;
    else
      u = ramp_propagator(vs, schedule, a, b, options) * u;
  }
  return u;
}

void reorthonormalize(CMatrix& columns) {
  if (columns.cols() == 0) return;
  Eigen::JacobiSVD<CMatrix> svd(columns, Eigen::ComputeThinU | Eigen::ComputeThinV);
  columns = svd.matrixU() * svd.matrixV().adjoint();
}

// ---------------------------------------------------------------------------

cplx overlap(const SlaterDeterminant& bra, const SlaterDeterminant& ket) {
  if (bra.particles() != ket.particles() || bra.sites() != ket.sites()) return 0.0;
  if (bra.particles() == 0) return 1.0;
  return (bra.orbitals.adjoint() * ket.orbitals).determinant();
}

double FermionicSuperposition::norm_squared() const {
  // Determinants of different configurations differ in particle number or in
  // the qubit occupations, so they are mutually orthogonal.
  double s = 0.0;
  for (const auto& t : terms) s += std::norm(t.amplitude) * std::real(overlap(t.det, t.det));
  return s;
}

FermionicSuperposition apply(const CMatrix& u, const FermionicSuperposition& state) {
  FermionicSuperposition out = state;
  for (auto& t : out.terms) t.det.orbitals = u * t.det.orbitals;
  return out;
}

FermionicSuperposition propagate_orbitals(const FermionicSuperposition& state, const ValidatedSpec& vs,
                                          const ControlSchedule& schedule, double t0, double t1,
                                          const PropagationOptions& options) {
  if (vs.spec.lambda != 0.0) throw ConfigError("ffq requires λ=0");
  if (vs.layout.has_outer()) {
    // Outer bonds hop across the qubit sites; that is only free-fermion exact
    // while both qubits stay empty and decoupled.
    const bool j0_off = schedule.j0_profile.is_constant() && schedule.j0_profile(t0) == 0.0;
    bool qubits_empty = true;
    for (const auto& t : state.terms) qubits_empty = qubits_empty && t.config == 0;
    if (!j0_off || !qubits_empty)
      throw ConfigError("ffq with outer segments needs J0 = 0 and empty qubits; use the mbq engine");
  }
  return ffq::apply(propagator(vs, schedule, t0, t1, options), state);
}

// ---------------------------------------------------------------------------

cplx TransferProfile::operator()(double t) const {
  cplx s = 0.0;
  for (Eigen::Index k = 0; k < omegas.size(); ++k) s += weights(k) * std::polar(1.0, -omegas(k) * t);
  return s;
}

TransferProfile transfer_profile(const ValidatedSpec& vs, double j0) {
  if (vs.spec.lambda != 0.0) throw ConfigError("ffq requires λ=0");
  const auto eig = diagonalize(build_single_particle(vs, ControlSchedule::sudden(j0), 0.0));
  TransferProfile p;
  p.omegas = eig.omegas;
  p.weights = eig.modes.row(vs.layout.qubit_b).transpose().cwiseProduct(eig.modes.row(vs.layout.qubit_a).transpose());
  return p;
}

cplx transfer_amplitude(const ValidatedSpec& vs, double j0, double t) { return transfer_profile(vs, j0)(t); }

// ---------------------------------------------------------------------------

BusGroundState bus_ground_state(const ValidatedSpec& vs, ZeroModePolicy policy) {
  if (vs.spec.lambda != 0.0) throw ConfigError("ffq requires λ=0");
  const auto& lay = vs.layout;
  const RMatrix full = build_single_particle(vs, ControlSchedule::sudden(0.0), 0.0).matrix;
  const int n = lay.n_bus();
  const RMatrix block = full.block(lay.bus_first, lay.bus_first, n, n);
  const auto eig = diagonalize({block});
  const auto occ = fermi_sea(eig.omegas, policy, "bus spectrum");

  BusGroundState gs;
  gs.orbitals = embed_columns(eig.modes, lay.bus_sites(), lay.total_sites, occ);
  for (int k : occ) gs.energy += eig.omegas(k);
  gs.parity_p = n - static_cast<int>(occ.size());
  return gs;
}

SlaterDeterminant lattice_ground_state(const ValidatedSpec& vs, const ControlSchedule& schedule, double t,
                                       ZeroModePolicy policy) {
  if (vs.spec.lambda != 0.0) throw ConfigError("ffq requires λ=0");
  const auto& lay = vs.layout;
  const RMatrix full = build_single_particle(vs, schedule, t).matrix;
  const auto sites = lay.lattice_sites();
  const int m = static_cast<int>(sites.size());
  RMatrix block(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) block(r, c) = full(sites[r], sites[c]);
  const auto eig = diagonalize({block});
  const auto occ = fermi_sea(eig.omegas, policy, "lattice spectrum");
  return {embed_columns(eig.modes, sites, lay.total_sites, occ)};
}

SlaterDeterminant configuration_determinant(int config, const CMatrix& bus_orbitals, const Layout& layout) {
  if (config < 0 || config > 3) throw ConfigError("configuration index must be in 0..3");
  const int a = config >> 1, b = config & 1;
  const int n = layout.total_sites;
  const int m = static_cast<int>(bus_orbitals.cols());
  if (bus_orbitals.rows() != n) throw ConfigError("bus orbitals have the wrong number of rows");

  CMatrix phi = bus_orbitals;
  // sigma^-_x = P_{<x} f_x^+; the string commutes with the new delta orbitals.
  if (b) phi.topRows(layout.qubit_b) *= -1.0;
  if (a) phi.topRows(layout.qubit_a) *= -1.0;

  CMatrix orb = CMatrix::Zero(n, a + b + m);
  int col = 0;
  if (a) orb(layout.qubit_a, col++) = 1.0;
  if (b) orb(layout.qubit_b, col++) = 1.0;
  orb.rightCols(m) = phi;
  return {orb};
}

FermionicSuperposition init_state(const Vec4& amplitudes, const CMatrix& bus_orbitals, const Layout& layout,
                                  int parity_p) {
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-10) throw ConfigError("qubit amplitudes must be normalized");
  FermionicSuperposition s;
  s.parity_p = parity_p;
  for (int c = 0; c < 4; ++c) {
    if (amplitudes(c) == 0.0) continue;
    s.terms.push_back({c, amplitudes(c), configuration_determinant(c, bus_orbitals, layout)});
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

// Normal forms of the 16 operators (|j><i|)_A (x) (|j><i|)_B, indexed [i][j].
std::vector<std::vector<std::vector<NormalTerm>>> pair_operators(const Layout& layout) {
  std::vector<std::vector<std::vector<NormalTerm>>> ops(4, std::vector<std::vector<NormalTerm>>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      OperatorWord w = spin_transition(layout.qubit_a, j >> 1, i >> 1);
      const auto wb = spin_transition(layout.qubit_b, j & 1, i & 1);
      w.insert(w.end(), wb.begin(), wb.end());
      ops[i][j] = normal_form(w, layout.total_sites);
    }
  return ops;
}

}  // namespace

Mat4 pair_kernel(const SlaterDeterminant& bra, const SlaterDeterminant& ket, const Layout& layout) {
  static thread_local int cached_sites = -1, cached_a = -1, cached_b = -1;
  static thread_local std::vector<std::vector<std::vector<NormalTerm>>> ops;
  if (cached_sites != layout.total_sites || cached_a != layout.qubit_a || cached_b != layout.qubit_b) {
    ops = pair_operators(layout);
    cached_sites = layout.total_sites;
    cached_a = layout.qubit_a;
    cached_b = layout.qubit_b;
  }
  MatrixElementEvaluator ev(bra, ket);
  Mat4 k = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k(i, j) = ev(ops[i][j]);
  return k;
}

Mat4 two_qubit_rdm(const FermionicSuperposition& state, const Layout& layout) {
  Mat4 rho = Mat4::Zero();
  for (const auto& y : state.terms)
    for (const auto& x : state.terms) {
      const Mat4 k = pair_kernel(y.det, x.det, layout);
      rho += std::conj(y.amplitude) * x.amplitude * k;
    }
  return rho;
}

double bus_fidelity(const FermionicSuperposition& state, const CMatrix& reference_bus_orbitals,
                    const Layout& layout) {
  if (layout.has_outer()) throw ConfigError("bus_fidelity needs a layout without outer segments");
  double f = 0.0;
  for (int q = 0; q < 4; ++q) {
    const auto ref = configuration_determinant(q, reference_bus_orbitals, layout);
    cplx amp = 0.0;
    for (const auto& t : state.terms) amp += t.amplitude * overlap(ref, t.det);
    f += std::norm(amp);
  }
  return f;
}

double block_fidelity(const SlaterDeterminant& state, const std::vector<int>& block_sites,
                      const CMatrix& reference_orbitals) {
  const int nb = static_cast<int>(block_sites.size());
  if (reference_orbitals.rows() != nb) throw ConfigError("reference orbitals must have one row per block site");
  CMatrix phi(nb, state.particles());
  for (int r = 0; r < nb; ++r) phi.row(r) = state.orbitals.row(block_sites[r]);
  const CMatrix c = phi * phi.adjoint();
  const CMatrix q = reference_orbitals * reference_orbitals.adjoint();
  const CMatrix id = CMatrix::Identity(nb, nb);
  const cplx f = ((id - c) * (id - q) + c * q).determinant();
  return std::real(f);
}

}  // namespace busgate::ffq
