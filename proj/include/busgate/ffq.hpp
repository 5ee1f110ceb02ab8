#pragma once

#include <vector>

#include "busgate/common.hpp"
#include "busgate/model.hpp"
#include "busgate/operator_word.hpp"

/// Free-fermion engine: exact lambda = 0 dynamics through single-particle
/// propagators acting on Slater determinant orbitals.
namespace busgate::ffq {

struct SingleParticleHamiltonian {
  RMatrix matrix;  // total_sites x total_sites, real symmetric
};

struct SingleParticleEigensystem {
  RVector omegas;
  RMatrix modes;  // column k is the mode with energy omegas(k)
};

/// Fermionized H(t): off-diagonals 2 x bond coupling, diagonal 2 x cut field.
SingleParticleHamiltonian build_single_particle(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                                double t);

SingleParticleHamiltonian build_single_particle(const ValidatedSpec& vs, const InstantControls& controls);

SingleParticleEigensystem diagonalize(const SingleParticleHamiltonian& h);

/// exp(-i H t) from an eigensystem.
CMatrix propagator(const SingleParticleEigensystem& eig, double t);

struct PropagationOptions {
  double initial_step = 0.01;  // in units of 1/J
  double tolerance = 1e-9;     // max-norm change between successive step halvings
  int max_halvings = 12;
  int reorthonormalize_every = 100;
};

/// U(t1, t0) for the schedule. Segments where the controls are constant use
/// the exact exponential; ramps use fourth-order commutator-free Magnus steps,
/// halved until successive results agree to options.tolerance.
CMatrix propagator(const ValidatedSpec& vs, const ControlSchedule& schedule, double t0, double t1,
                   const PropagationOptions& options = {});

struct SlaterDeterminant {
  CMatrix orbitals;  // sites x particles

  int particles() const { return static_cast<int>(orbitals.cols()); }
  int sites() const { return static_cast<int>(orbitals.rows()); }
};

cplx overlap(const SlaterDeterminant& bra, const SlaterDeterminant& ket);

struct SuperpositionTerm {
  int config = 0;  // two_qubit_index(a, b) of the qubit configuration
  cplx amplitude;
  SlaterDeterminant det;
};

/// Full state as a weighted sum of determinants, one per qubit configuration.
struct FermionicSuperposition {
  std::vector<SuperpositionTerm> terms;
  int parity_p = 0;

  double norm_squared() const;
};

FermionicSuperposition apply(const CMatrix& u, const FermionicSuperposition& state);

FermionicSuperposition propagate_orbitals(const FermionicSuperposition& state, const ValidatedSpec& vs,
                                          const ControlSchedule& schedule, double t0, double t1,
                                          const PropagationOptions& options = {});

/// Element (B, A) of exp(-i H t) with both qubit bonds at j0.
cplx transfer_amplitude(const ValidatedSpec& vs, double j0, double t);

/// U_{B,A}(t) = sum_k w_k exp(-i omega_k t) for a fixed j0, cheap to scan in t.
struct TransferProfile {
  RVector weights;
  RVector omegas;

  cplx operator()(double t) const;
};

TransferProfile transfer_profile(const ValidatedSpec& vs, double j0);

struct BusGroundState {
  CMatrix orbitals;  // total_sites x M, zero outside the bus
  int parity_p = 0;
  double energy = 0.0;
};

/// Fermi sea of the isolated bus (J0 = 0 block). Zero modes are rejected
/// unless a policy says how to fill them.
BusGroundState bus_ground_state(const ValidatedSpec& vs, ZeroModePolicy policy = ZeroModePolicy::Reject);

/// Ground state of the whole lattice (outer segments and bus, qubits empty)
/// under the controls at time t.
SlaterDeterminant lattice_ground_state(const ValidatedSpec& vs, const ControlSchedule& schedule, double t,
                                       ZeroModePolicy policy = ZeroModePolicy::Reject);

/// Spin state |a>_A |b>_B (x) |lattice> as a determinant. Orbital columns are
/// [e_A][e_B][D lattice], where D carries the strings of the qubit flips.
SlaterDeterminant configuration_determinant(int config, const CMatrix& bus_orbitals, const Layout& layout);

/// Product of qubit amplitudes c_ab (indexed by two_qubit_index) and the bus.
/// Terms with zero amplitude are omitted.
FermionicSuperposition init_state(const Vec4& amplitudes, const CMatrix& bus_orbitals, const Layout& layout,
                                  int parity_p);

/// K(i, j) = <bra| (|j><i|)_A (x) (|j><i|)_B |ket>.
Mat4 pair_kernel(const SlaterDeterminant& bra, const SlaterDeterminant& ket, const Layout& layout);

/// Reduced density matrix of the two qubits, <i|rho|j>.
Mat4 two_qubit_rdm(const FermionicSuperposition& state, const Layout& layout);

/// <ref|rho_bus|ref> for a layout without outer segments.
double bus_fidelity(const FermionicSuperposition& state, const CMatrix& reference_bus_orbitals,
                    const Layout& layout);

/// <ref|rho_block|ref> for a determinant restricted to a contiguous block of
/// sites. reference_orbitals has one row per block site.
double block_fidelity(const SlaterDeterminant& state, const std::vector<int>& block_sites,
                      const CMatrix& reference_orbitals);

/// Re-orthonormalizes columns through the polar factor, which leaves the
/// determinant's phase untouched.
void reorthonormalize(CMatrix& columns);

}  // namespace busgate::ffq
