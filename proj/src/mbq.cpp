#include "busgate/mbq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "busgate/parallel.hpp"

namespace busgate::mbq {

namespace {

constexpr std::size_t kChunk = 4096;

std::uint32_t scatter_bits(std::uint32_t r, const std::vector<int>& sites, int total_sites) {
  const int n = static_cast<int>(sites.size());
  std::uint32_t s = 0;
  for (int p = 0; p < n; ++p)
    if ((r >> (n - 1 - p)) & 1u) s |= std::uint32_t{1} << (total_sites - 1 - sites[p]);
  return s;
}

std::vector<int> complement(const std::vector<int>& sites, int total_sites) {
  std::vector<int> rest;
  for (int s = 0; s < total_sites; ++s)
    if (std::find(sites.begin(), sites.end(), s) == sites.end()) rest.push_back(s);
  return rest;
}

std::uint32_t qubit_bits(int config, const Layout& layout) {
  const int l = layout.total_sites;
  std::uint32_t m = 0;
  if (config >> 1) m |= std::uint32_t{1} << (l - 1 - layout.qubit_a);
  if (config & 1) m |= std::uint32_t{1} << (l - 1 - layout.qubit_b);
  return m;
}

CVector gather_sector(const Basis& basis, int k, const CVector& full) {
  const auto& st = basis.sector(k);
  CVector v(static_cast<Eigen::Index>(st.size()));
  for (std::size_t i = 0; i < st.size(); ++i) v(i) = full(st[i]);
  return v;
}

void scatter_sector(const Basis& basis, int k, const CVector& v, CVector& full) {
  const auto& st = basis.sector(k);
  for (std::size_t i = 0; i < st.size(); ++i) full(st[i]) = v(i);
}

void check_state(const DenseState& state, const ValidatedSpec& vs) {
  if (state.sites != vs.layout.total_sites ||
      state.amplitudes.size() != static_cast<Eigen::Index>(std::uint64_t{1} << state.sites))
    throw ConfigError("dense state does not match the chain layout");
}

DenseState static_step(const DenseState& state, const ManyBodyHamiltonian& h, double dt,
                       const krylov::ExpOptions& opt) {
  DenseState out{state.sites, CVector::Zero(state.amplitudes.size())};
  const auto& basis = h.basis();
  for (int k : occupied_sectors(state)) {
    const CVector v = gather_sector(basis, k, state.amplitudes);
    scatter_sector(basis, k, krylov::expmv(h.sector_operator(k), v, dt, opt), out.amplitudes);
  }
  return out;
}

DenseState magnus_pass(const DenseState& state, const ValidatedSpec& vs, const ControlSchedule& schedule,
                       double a, double b, long steps, const EvolveOptions& opt) {
  const double h = (b - a) / static_cast<double>(steps);
  DenseState x = state;
  for (long s = 0; s < steps; ++s) {
    const auto ms = magnus_step(vs, schedule, a + s * h, h);
    x = static_step(x, ManyBodyHamiltonian::from_controls(vs, ms.early, opt.site_cap), 0.5 * h, opt.krylov);
    x = static_step(x, ManyBodyHamiltonian::from_controls(vs, ms.late, opt.site_cap), 0.5 * h, opt.krylov);
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------

ManyBodyHamiltonian::ManyBodyHamiltonian(int sites, std::vector<SpinBond> bonds, std::vector<double> fields,
                                         double lambda, int site_cap)
    : sites_(sites), bonds_(std::move(bonds)), fields_(std::move(fields)), lambda_(lambda) {
  if (sites > site_cap)
    throw ConfigError("dense engine: " + std::to_string(sites) + " sites exceed the cap of " +
                      std::to_string(site_cap));
  if (static_cast<int>(fields_.size()) != sites) throw ConfigError("dense engine: one field per site required");
  for (const auto& b : bonds_)
    if (b.left < 0 || b.right < 0 || b.left >= sites || b.right >= sites || b.left == b.right)
      throw ConfigError("dense engine: bond outside the register");
  basis_ = Basis::get(sites);
}

ManyBodyHamiltonian ManyBodyHamiltonian::from_controls(const ValidatedSpec& vs, const InstantControls& c,
                                                       int site_cap) {
  std::vector<SpinBond> bonds;
  for (std::size_t i = 0; i < vs.layout.bonds.size(); ++i)
    bonds.push_back({vs.layout.bonds[i].left, vs.layout.bonds[i].right, c.couplings[i]});
  return ManyBodyHamiltonian(vs.layout.total_sites, std::move(bonds), c.fields, vs.spec.lambda, site_cap);
}

ManyBodyHamiltonian ManyBodyHamiltonian::at(const ValidatedSpec& vs, const ControlSchedule& schedule, double t,
                                            int site_cap) {
  return from_controls(vs, controls_at(vs, schedule, t), site_cap);
}

ManyBodyHamiltonian ManyBodyHamiltonian::bus_block(const ValidatedSpec& vs, int site_cap) {
  const auto& lay = vs.layout;
  std::vector<SpinBond> bonds;
  for (const auto& b : lay.bonds)
    if (b.kind == BondKind::Bus) bonds.push_back({b.left - lay.bus_first, b.right - lay.bus_first, vs.spec.j});
  std::vector<double> fields(lay.n_bus());
  for (int s = 0; s < lay.n_bus(); ++s) fields[s] = site_field(lay.bus_first + s, vs.spec, ControlSchedule{}, 0.0);
  return ManyBodyHamiltonian(lay.n_bus(), std::move(bonds), std::move(fields), vs.spec.lambda, site_cap);
}

double ManyBodyHamiltonian::diagonal(std::uint32_t s) const {
  double d = 0.0;
  if (lambda_ != 0.0)
    for (const auto& b : bonds_) {
      const bool l = s & basis_->mask(b.left), r = s & basis_->mask(b.right);
      d += lambda_ * b.coupling * (l == r ? 1.0 : -1.0);
    }
  for (int i = 0; i < sites_; ++i)
    if (fields_[i] != 0.0) d -= fields_[i] * ((s & basis_->mask(i)) ? -1.0 : 1.0);
  return d;
}

void ManyBodyHamiltonian::apply_sector(int k, const CVector& x, CVector& y) const {
  const auto& st = basis_->sector(k);
  y.resize(static_cast<Eigen::Index>(st.size()));
  parallel_for(
      st.size(),
      [&](std::size_t i) {
        const std::uint32_t s = st[i];
        cplx acc = diagonal(s) * x(i);
        for (const auto& b : bonds_) {
          const std::uint32_t ml = basis_->mask(b.left), mr = basis_->mask(b.right);
          if (((s & ml) != 0) != ((s & mr) != 0)) acc += 2.0 * b.coupling * x(basis_->rank(s ^ (ml | mr)));
        }
        y(i) = acc;
      },
      kChunk);
}

void ManyBodyHamiltonian::apply(const CVector& x, CVector& y) const {
  const std::uint64_t dim = basis_->dimension();
  if (x.size() != static_cast<Eigen::Index>(dim)) throw ConfigError("dense engine: vector size mismatch");
  y.resize(x.size());
  parallel_for(
      dim,
      [&](std::size_t i) {
        const auto s = static_cast<std::uint32_t>(i);
        cplx acc = diagonal(s) * x(i);
        for (const auto& b : bonds_) {
          const std::uint32_t ml = basis_->mask(b.left), mr = basis_->mask(b.right);
          if (((s & ml) != 0) != ((s & mr) != 0)) acc += 2.0 * b.coupling * x(s ^ (ml | mr));
        }
        y(i) = acc;
      },
      kChunk);
}

krylov::MatVec ManyBodyHamiltonian::sector_operator(int k) const {
  return [this, k](const CVector& x, CVector& y) { apply_sector(k, x, y); };
}

// ---------------------------------------------------------------------------

std::vector<int> occupied_sectors(const DenseState& state) {
  std::vector<bool> hit(state.sites + 1, false);
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    if (state.amplitudes(i) != 0.0) hit[std::popcount(static_cast<std::uint64_t>(i))] = true;
  std::vector<int> ks;
  for (int k = 0; k <= state.sites; ++k)
    if (hit[k]) ks.push_back(k);
  return ks;
}

DenseState evolve(const DenseState& state, const ValidatedSpec& vs, const ControlSchedule& schedule, double t0,
                  double t1, const EvolveOptions& options) {
  if (t1 < t0) throw ConfigError("evolve requires t1 >= t0");
  check_state(state, vs);
  std::vector<double> cuts{t0};
  for (double b : schedule.breakpoints(t0, t1)) cuts.push_back(b);
  cuts.push_back(t1);

  DenseState x = state;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    if (schedule.constant_on(a, b)) {
      x = static_step(x, ManyBodyHamiltonian::at(vs, schedule, 0.5 * (a + b), options.site_cap), b - a,
                      options.krylov);
      continue;
    }
    long steps = std::max(1L, static_cast<long>(std::ceil((b - a) / options.ramp_step - 1e-9)));
    DenseState prev = magnus_pass(x, vs, schedule, a, b, steps, options);
    bool done = false;
    double change = 0.0;
    for (int k = 0; k < options.max_halvings && !done; ++k) {
      steps *= 2;
      DenseState cur = magnus_pass(x, vs, schedule, a, b, steps, options);
      change = (cur.amplitudes - prev.amplitudes).cwiseAbs().maxCoeff();
      done = change < options.ramp_tolerance;
      prev = std::move(cur);
    }
    if (!done)
      throw NumericalError("dense ramp propagation did not converge: last change " + std::to_string(change));
    x = std::move(prev);
  }
  return x;
}

SectorPropagator::SectorPropagator(const ManyBodyHamiltonian& h, double t, int max_sector_dimension) {
  basis_ = Basis::get(h.sites());
  blocks_.resize(h.sites() + 1);
  for (int k = 0; k <= h.sites(); ++k) {
    const auto n = static_cast<Eigen::Index>(basis_->sector(k).size());
    if (n > max_sector_dimension) continue;  // left empty; apply() rejects such sectors
    CMatrix dense(n, n);
    CVector e(n), col(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      e.setZero();
      e(i) = 1.0;
      h.apply_sector(k, e, col);
      dense.col(i) = col;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (dense + dense.adjoint()));
    if (es.info() != Eigen::Success) throw NumericalError("sector eigensolver failed");
    CVector ph(n);
    for (Eigen::Index i = 0; i < n; ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
    blocks_[k] = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  }
}

DenseState SectorPropagator::apply(const DenseState& state) const {
  if (state.sites != basis_->sites()) throw ConfigError("sector propagator: register size mismatch");
  DenseState out{state.sites, CVector::Zero(state.amplitudes.size())};
  for (int k : occupied_sectors(state)) {
    const auto n = static_cast<Eigen::Index>(basis_->sector(k).size());
    if (blocks_[k].rows() != n) throw ConfigError("sector propagator: sector too large for dense storage");
    scatter_sector(*basis_, k, blocks_[k] * gather_sector(*basis_, k, state.amplitudes), out.amplitudes);
  }
  return out;
}

// ---------------------------------------------------------------------------

GroundState ground_state(const ManyBodyHamiltonian& h, ZeroModePolicy policy, const krylov::EigenOptions& options) {
  const auto& basis = h.basis();
  struct Candidate {
    int k;
    krylov::EigenPair pair;
  };
  std::vector<Candidate> cands;
  for (int k = 0; k <= h.sites(); ++k) {
    const auto n = static_cast<Eigen::Index>(basis.sector(k).size());
    std::mt19937 gen(0x5eed + k);
    CVector start(n);
    for (Eigen::Index i = 0; i < n; ++i) start(i) = static_cast<double>(gen()) / 4294967296.0 - 0.5;
    cands.push_back({k, krylov::lowest_eigenpair(h.sector_operator(k), start, options)});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.pair.value < b.pair.value; });

  std::size_t pick = 0;
  if (cands.size() > 1) {
    const double gap = cands[1].pair.value - cands[0].pair.value;
    if (gap < 1e-8 * std::max(1.0, std::abs(cands[0].pair.value))) {
      if (policy == ZeroModePolicy::Reject)
        throw ConfigError("ground state is degenerate between particle-number sectors " +
                          std::to_string(cands[0].k) + " and " + std::to_string(cands[1].k) +
                          "; choose an occupancy explicitly (odd bus length)");
      const bool first_larger = cands[0].k > cands[1].k;
      pick = (policy == ZeroModePolicy::Occupy) == first_larger ? 0 : 1;
    }
  }
  const auto& c = cands[pick];
  GroundState gs;
  gs.vector = CVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  scatter_sector(basis, c.k, c.pair.vector, gs.vector);
  gs.energy = c.pair.value;
  gs.particles = c.k;
  gs.parity_p = h.sites() - c.k;
  gs.residual = c.pair.residual;
  return gs;
}

GroundState bus_ground_state(const ValidatedSpec& vs, ZeroModePolicy policy, int site_cap) {
  return ground_state(ManyBodyHamiltonian::bus_block(vs, site_cap), policy);
}

// ---------------------------------------------------------------------------

std::uint32_t gather_bits(std::uint32_t s, const std::vector<int>& sites, int total_sites) {
  std::uint32_t r = 0;
  for (int site : sites) r = (r << 1) | ((s >> (total_sites - 1 - site)) & 1u);
  return r;
}

namespace {

DenseState product_on(const Layout& layout, const Vec4& c, const CVector& v, const std::vector<int>& sites) {
  const int l = layout.total_sites;
  if (v.size() != (Eigen::Index{1} << sites.size())) throw ConfigError("factor state has the wrong dimension");
  DenseState out{l, CVector::Zero(Eigen::Index{1} << l)};
  for (Eigen::Index r = 0; r < v.size(); ++r) {
    if (v(r) == 0.0) continue;
    const std::uint32_t base = scatter_bits(static_cast<std::uint32_t>(r), sites, l);
    for (int q = 0; q < 4; ++q)
      if (c(q) != 0.0) out.amplitudes(base | qubit_bits(q, layout)) += c(q) * v(r);
  }
  return out;
}

}  // namespace

DenseState product_state(const Layout& layout, const Vec4& qubit_amplitudes, const CVector& lattice) {
  return product_on(layout, qubit_amplitudes, lattice, layout.lattice_sites());
}

DenseState product_state_bus(const Layout& layout, const Vec4& qubit_amplitudes, const CVector& bus) {
  return product_on(layout, qubit_amplitudes, bus, layout.bus_sites());
}

CVector dense_from_slater(const ffq::SlaterDeterminant& det, const std::vector<int>& sites) {
  const int n = static_cast<int>(sites.size());
  const int m = det.particles();
  if (n > 30) throw ConfigError("register too large");
  double outside = 0.0;
  for (int r = 0; r < det.sites(); ++r)
    if (std::find(sites.begin(), sites.end(), r) == sites.end()) outside += det.orbitals.row(r).squaredNorm();
  if (outside > 1e-16) throw ConfigError("determinant has weight outside the requested register");

  const auto basis = Basis::get(n);
  const auto& st = basis->sector(m);
  CVector out = CVector::Zero(Eigen::Index{1} << n);
  if (m == 0) {
    out(0) = 1.0;
    return out;
  }
  parallel_for(
      st.size(),
      [&](std::size_t i) {
        const std::uint32_t s = st[i];
        CMatrix sub(m, m);
        int row = 0;
        for (int p = 0; p < n; ++p)
          if ((s >> (n - 1 - p)) & 1u) sub.row(row++) = det.orbitals.row(sites[p]);
        out(s) = sub.determinant();
      },
      256);
  return out;
}

Mat4 pair_kernel(const DenseState& bra, const DenseState& ket, const Layout& layout) {
  if (bra.sites != layout.total_sites || ket.sites != layout.total_sites)
    throw ConfigError("pair_kernel: state does not match the layout");
  std::uint32_t bits[4];
  for (int q = 0; q < 4; ++q) bits[q] = qubit_bits(q, layout);
  const std::uint32_t qmask = bits[3];
  Mat4 k = Mat4::Zero();
  const auto dim = static_cast<std::uint64_t>(ket.amplitudes.size());
  for (std::uint64_t s = 0; s < dim; ++s) {
    if (s & qmask) continue;
    for (int i = 0; i < 4; ++i) {
      const cplx xi = ket.amplitudes(s | bits[i]);
      if (xi == 0.0) continue;
      for (int j = 0; j < 4; ++j) k(i, j) += std::conj(bra.amplitudes(s | bits[j])) * xi;
    }
  }
  return k;
}

Mat4 reduced_two_qubit(const DenseState& state, const Layout& layout) { return pair_kernel(state, state, layout); }

CVector project_block(const DenseState& state, const std::vector<int>& block_sites, const CVector& reference) {
  const int l = state.sites;
  const auto rest = complement(block_sites, l);
  if (reference.size() != (Eigen::Index{1} << block_sites.size()))
    throw ConfigError("block reference has the wrong dimension");
  CVector amp = CVector::Zero(Eigen::Index{1} << rest.size());
  for (Eigen::Index s = 0; s < state.amplitudes.size(); ++s) {
    const cplx psi = state.amplitudes(s);
    if (psi == 0.0) continue;
    const auto u = static_cast<std::uint32_t>(s);
    amp(gather_bits(u, rest, l)) += std::conj(reference(gather_bits(u, block_sites, l))) * psi;
  }
  return amp;
}

double block_fidelity(const DenseState& state, const std::vector<int>& block_sites, const CVector& reference) {
  return project_block(state, block_sites, reference).squaredNorm();
}

double bus_overlap_fidelity(const DenseState& state, const CVector& bus_reference, const Layout& layout) {
  return block_fidelity(state, layout.bus_sites(), bus_reference);
}

CMatrix reduced_block(const DenseState& state, const std::vector<int>& block_sites) {
  const int l = state.sites;
  const auto rest = complement(block_sites, l);
  CMatrix psi = CMatrix::Zero(Eigen::Index{1} << block_sites.size(), Eigen::Index{1} << rest.size());
  for (Eigen::Index s = 0; s < state.amplitudes.size(); ++s) {
    const auto u = static_cast<std::uint32_t>(s);
    psi(gather_bits(u, block_sites, l), gather_bits(u, rest, l)) = state.amplitudes(s);
  }
  return psi * psi.adjoint();
}

cplx transfer_amplitude(const ValidatedSpec& vs, double j0, double t, int site_cap) {
  const auto h = ManyBodyHamiltonian::at(vs, ControlSchedule::sudden(j0), 0.0, site_cap);
  const auto& basis = h.basis();
  const auto n = static_cast<Eigen::Index>(basis.sector(1).size());
  CVector v = CVector::Zero(n);
  v(basis.rank(basis.mask(vs.layout.qubit_a))) = 1.0;
  const CVector w = krylov::expmv(h.sector_operator(1), v, t);
  return w(basis.rank(basis.mask(vs.layout.qubit_b)));
}

double bus_parity(const DenseState& state, const Layout& layout) {
  std::uint32_t bus_mask = 0;
  for (int s : layout.bus_sites()) bus_mask |= std::uint32_t{1} << (state.sites - 1 - s);
  const int n = layout.n_bus();
  double p = 0.0;
  for (Eigen::Index s = 0; s < state.amplitudes.size(); ++s) {
    const int occupied = std::popcount(static_cast<std::uint32_t>(s) & bus_mask);
    p += std::norm(state.amplitudes(s)) * (((n - occupied) % 2) ? -1.0 : 1.0);
  }
  return p;
}

}  // namespace busgate::mbq
