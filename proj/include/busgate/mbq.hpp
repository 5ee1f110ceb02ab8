#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "busgate/common.hpp"
#include "busgate/ffq.hpp"
#include "busgate/krylov.hpp"
#include "busgate/model.hpp"

/// Dense many-body engine. Basis states are bit strings with site 0 as the
/// most significant bit; a set bit is a down spin (computational |1>).
namespace busgate::mbq {

inline constexpr int kDefaultSiteCap = 24;

/// Fixed-particle-number sectors of an L-site register.
class Basis {
 public:
  /// Shared instance per site count; built on first use.
  static std::shared_ptr<const Basis> get(int sites);

  explicit Basis(int sites);

  int sites() const { return sites_; }
  std::uint64_t dimension() const { return std::uint64_t{1} << sites_; }
  /// States with k set bits, ascending.
  const std::vector<std::uint32_t>& sector(int k) const { return sectors_[k]; }
  /// Position of s inside its sector.
  std::uint32_t rank(std::uint32_t s) const { return rank_[s]; }
  /// Bit mask of a site.
  std::uint32_t mask(int site) const { return std::uint32_t{1} << (sites_ - 1 - site); }

 private:
  int sites_;
  std::vector<std::vector<std::uint32_t>> sectors_;
  std::vector<std::uint32_t> rank_;
};

struct SpinBond {
  int left = 0;
  int right = 0;
  double coupling = 0.0;
};

/// H = sum_bonds c (XX + YY + lambda ZZ) - sum_sites h sigma^z, applied matrix-free.
class ManyBodyHamiltonian {
 public:
  ManyBodyHamiltonian(int sites, std::vector<SpinBond> bonds, std::vector<double> fields, double lambda,
                      int site_cap = kDefaultSiteCap);

  /// Whole layout under the given controls.
  static ManyBodyHamiltonian from_controls(const ValidatedSpec& vs, const InstantControls& c,
                                           int site_cap = kDefaultSiteCap);
  static ManyBodyHamiltonian at(const ValidatedSpec& vs, const ControlSchedule& schedule, double t,
                                int site_cap = kDefaultSiteCap);
  /// Bus sites only (J0 = 0 block), re-indexed 0..N-1.
  static ManyBodyHamiltonian bus_block(const ValidatedSpec& vs, int site_cap = kDefaultSiteCap);

  int sites() const { return sites_; }
  const Basis& basis() const { return *basis_; }

  double diagonal(std::uint32_t s) const;
  /// y = H x on the sector with k particles (vectors indexed by sector rank).
  void apply_sector(int k, const CVector& x, CVector& y) const;
  /// y = H x on the full space.
  void apply(const CVector& x, CVector& y) const;
  krylov::MatVec sector_operator(int k) const;

 private:
  int sites_;
  std::vector<SpinBond> bonds_;
  std::vector<double> fields_;
  double lambda_;
  std::shared_ptr<const Basis> basis_;
};

/// Full-space amplitude vector.
struct DenseState {
  int sites = 0;
  CVector amplitudes;
};

/// Sectors carrying weight (exact zeros are skipped).
std::vector<int> occupied_sectors(const DenseState& state);

struct EvolveOptions {
  krylov::ExpOptions krylov;
  double ramp_step = 0.05;        // initial Magnus step on non-constant segments
  double ramp_tolerance = 1e-9;   // max-norm change between step halvings
  int max_halvings = 8;
  int site_cap = kDefaultSiteCap;
};

/// exp-propagation over [t0, t1]: exact Krylov exponentials on constant
/// segments, fourth-order commutator-free Magnus steps on ramps.
DenseState evolve(const DenseState& state, const ValidatedSpec& vs, const ControlSchedule& schedule, double t0,
                  double t1, const EvolveOptions& options = {});

/// exp(-i H t) for a static H, stored densely per occupied sector. Meant for
/// small registers where many states share one propagation time.
class SectorPropagator {
 public:
  SectorPropagator(const ManyBodyHamiltonian& h, double t, int max_sector_dimension = 4096);
  DenseState apply(const DenseState& state) const;

 private:
  std::shared_ptr<const Basis> basis_;
  std::vector<CMatrix> blocks_;
};

struct GroundState {
  CVector vector;  // over the block's own 2^n register
  double energy = 0.0;
  int particles = 0;
  int parity_p = 0;  // number of up spins
  double residual = 0.0;
};

/// Lowest state over all particle-number sectors. Two degenerate lowest
/// sectors are rejected unless the policy picks one (Occupy: more particles).
GroundState ground_state(const ManyBodyHamiltonian& h, ZeroModePolicy policy = ZeroModePolicy::Reject,
                         const krylov::EigenOptions& options = {});

/// Ground state of the isolated bus.
GroundState bus_ground_state(const ValidatedSpec& vs, ZeroModePolicy policy = ZeroModePolicy::Reject,
                             int site_cap = kDefaultSiteCap);

/// Register index built from the bits of `sites` inside full index s.
std::uint32_t gather_bits(std::uint32_t s, const std::vector<int>& sites, int total_sites);

/// |a>_A |b>_B (x) |lattice>, where `lattice` lives on layout.lattice_sites().
DenseState product_state(const Layout& layout, const Vec4& qubit_amplitudes, const CVector& lattice);

/// Same with the lattice factor given on the bus sites only (rest empty).
DenseState product_state_bus(const Layout& layout, const Vec4& qubit_amplitudes, const CVector& bus);

/// Amplitudes of a Slater determinant on the register formed by `sites`
/// (ascending). The determinant must vanish outside those sites.
CVector dense_from_slater(const ffq::SlaterDeterminant& det, const std::vector<int>& sites);

/// K(i, j) = <bra| (|j><i|)_A (x) (|j><i|)_B |ket>.
Mat4 pair_kernel(const DenseState& bra, const DenseState& ket, const Layout& layout);

/// <i|rho_AB|j>.
Mat4 reduced_two_qubit(const DenseState& state, const Layout& layout);

/// phi(rest) = sum_b conj(ref(b)) psi(b, rest): the state projected onto ref
/// on the block, indexed by the register of the remaining sites.
CVector project_block(const DenseState& state, const std::vector<int>& block_sites, const CVector& reference);

/// <ref|rho_block|ref>, with ref on the register of block_sites.
double block_fidelity(const DenseState& state, const std::vector<int>& block_sites, const CVector& reference);

/// <ref|rho_bus|ref>.
double bus_overlap_fidelity(const DenseState& state, const CVector& bus_reference, const Layout& layout);

/// Reduced density matrix of a block (dimension 2^|block|).
CMatrix reduced_block(const DenseState& state, const std::vector<int>& block_sites);

/// <B| exp(-i H t) |A> in the single down-spin sector.
cplx transfer_amplitude(const ValidatedSpec& vs, double j0, double t, int site_cap = kDefaultSiteCap);

/// Expectation of the bus parity operator prod (-sigma^z).
double bus_parity(const DenseState& state, const Layout& layout);

}  // namespace busgate::mbq
