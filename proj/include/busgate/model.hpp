#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "busgate/common.hpp"

namespace busgate {

// ---------------------------------------------------------------------------
// Conventions
//
// Computational |0> is spin up, |1> is spin down. A down spin is an occupied
// Jordan-Wigner fermion, n = (1 - sigma^z) / 2, and the fermion string of
// site x is prod_{k<x} (-1)^{n_k}.
//
// A bond with exchange coupling c contributes c (XX + YY + lambda ZZ). The
// flip-flop part hops a fermion with amplitude kHoppingFactor * c, so the
// uniform bus has single-particle energies in [-4J, 4J].
//
// A local cut field of strength h is the spin term -h sigma^z, i.e. a
// single-particle diagonal entry kFieldFactor * h on the occupied state.
// Positive h therefore penalizes occupation.
// ---------------------------------------------------------------------------
inline constexpr double kHoppingFactor = 2.0;
inline constexpr double kFieldFactor = 2.0;

struct CutField {
  int site = 0;
  double strength = 0.0;  // in units of J
};

struct ChainSpec {
  int n_bus = 1;
  double j = 1.0;
  double j0 = 0.0;
  double lambda = 0.0;
  int extra_left = 0;
  int extra_right = 0;
  std::vector<CutField> cut_fields;
};

/// What to do with a zero-energy single-particle mode (odd bus length) or,
/// equivalently, with two degenerate particle-number sectors.
enum class ZeroModePolicy { Reject, Occupy, Leave };

enum class BondKind { Bus, Qubit, Outer };

struct Bond {
  int left = 0;
  int right = 0;
  BondKind kind = BondKind::Bus;
};

/// Site indexing derived from a ChainSpec.
///
/// Sites are laid out as [outer left][A][bus][B][outer right]. The qubits are
/// side-coupled to the bus ends, so the lattice bond between the last outer
/// site and the first bus site skips over A (likewise for B on the right).
struct Layout {
  int total_sites = 0;
  int qubit_a = 0;
  int qubit_b = 0;
  int bus_first = 0;
  int bus_last = 0;
  int outer_left_first = 0;   // outer range [outer_left_first, qubit_a)
  int outer_right_first = 0;  // outer range [outer_right_first, total_sites)
  std::vector<Bond> bonds;

  int n_bus() const { return bus_last - bus_first + 1; }
  bool has_outer() const { return qubit_a > 0 || qubit_b + 1 < total_sites; }
  bool is_bus_site(int s) const { return s >= bus_first && s <= bus_last; }
  bool is_outer_site(int s) const { return s < qubit_a || s > qubit_b; }
  /// Sites of the optical lattice (outer segments and bus), ascending.
  std::vector<int> lattice_sites() const;
  std::vector<int> bus_sites() const;
};

/// Thrown by validate_spec; carries every violated invariant.
class SpecError : public ConfigError {
 public:
  explicit SpecError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct ValidatedSpec {
  ChainSpec spec;
  Layout layout;
};

/// Checks the invariants of a ChainSpec and derives its site layout.
/// Throws SpecError listing all violations at once.
ValidatedSpec validate_spec(const ChainSpec& spec);

// ---------------------------------------------------------------------------
// Time-dependent controls
// ---------------------------------------------------------------------------

/// Piecewise-linear function of time with constant extrapolation.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  /// Knots must have strictly increasing times.
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);

  static PiecewiseLinear constant(double value);
  /// value0 until t0, linear to value1 at t1, value1 afterwards.
  static PiecewiseLinear ramp(double t0, double value0, double t1, double value1);

  double operator()(double t) const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  bool is_constant() const;
  /// Times of all knots strictly inside (t0, t1).
  std::vector<double> breakpoints(double t0, double t1) const;
  /// True if the function has the same value over all of [t0, t1].
  bool constant_on(double t0, double t1) const;

 private:
  std::vector<std::pair<double, double>> knots_;
};

struct ControlSchedule {
  PiecewiseLinear j0_profile = PiecewiseLinear::constant(0.0);
  std::map<int, PiecewiseLinear> field_profiles;
  double horizon = 0.0;

  /// Sudden quench: J0 constant from t = 0, no time-dependent fields.
  static ControlSchedule sudden(double j0, double horizon = 0.0);
  bool constant_on(double t0, double t1) const;
  /// Union of all knot times strictly inside (t0, t1), sorted.
  std::vector<double> breakpoints(double t0, double t1) const;
};

/// Coupling of a bond at time t (J for bus and outer bonds, J0(t) for qubit bonds).
double bond_coupling(const Bond& bond, const ChainSpec& spec, const ControlSchedule& schedule,
                     double t);

/// Cut field at a site at time t: static field from the spec plus the schedule profile.
double site_field(int site, const ChainSpec& spec, const ControlSchedule& schedule, double t);

/// Every control value at one instant: one coupling per layout bond and one
/// field per site. Hamiltonians of both engines are linear in these.
struct InstantControls {
  std::vector<double> couplings;
  std::vector<double> fields;
};

InstantControls controls_at(const ValidatedSpec& vs, const ControlSchedule& schedule, double t);

/// wa * a + wb * b, entrywise.
InstantControls blend(double wa, const InstantControls& a, double wb, const InstantControls& b);

/// Fourth-order commutator-free Magnus step built from two Gauss nodes.
///
/// One step of length h is exp(-i h H(late)) exp(-i h H(early)), where each
/// factor uses blended controls at half weight. Both engines use the same
/// blending through this helper.
struct MagnusStep {
  InstantControls early;  // applied first
  InstantControls late;
};

/// Controls for the two exponentials of the step [t, t + h]; each exponential
/// runs for h / 2 with the returned controls.
MagnusStep magnus_step(const ValidatedSpec& vs, const ControlSchedule& schedule, double t, double h);

// ---------------------------------------------------------------------------
// Closed-form estimates
// ---------------------------------------------------------------------------

/// 1.05 J n^{-1/6}
double optimal_coupling_estimate(int n, double j = 1.0);
/// (0.25 n + 0.52 n^{1/3}) / J
double transfer_time_estimate(int n, double j = 1.0);

// ---------------------------------------------------------------------------
// Ideal gate G|ab> = e^{i phi_ab} |ba>
// ---------------------------------------------------------------------------

/// Two-qubit basis index of |ab>: qubit A is the high bit.
constexpr int two_qubit_index(int a, int b) { return 2 * a + b; }

struct IdealGate {
  double alpha_n = 0.0;
  int parity_p = 0;
  std::array<double, 4> phases{};  // phi_00, phi_01, phi_10, phi_11 in (-pi, pi]

  /// 4x4 unitary in the |ab> basis.
  Mat4 matrix() const;
};

/// Transfer phase of the mirror-inverting bus, -pi (N+1)/2 wrapped.
///
/// This is arg U_{0,N+1}(t*) for the hopping sign fixed above; for odd N it
/// coincides with +pi (N+1)/2.
double transfer_phase(int n);

/// Gate built from an explicit transfer phase.
IdealGate gate_from_alpha(double alpha, int parity_p);

/// Gate expected for a bus of length n prepared with parity exponent p.
IdealGate ideal_gate(int n, int parity_p);

}  // namespace busgate
