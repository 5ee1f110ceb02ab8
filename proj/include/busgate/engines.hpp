#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "busgate/ffq.hpp"
#include "busgate/maps.hpp"
#include "busgate/mbq.hpp"
#include "busgate/model.hpp"

namespace busgate {

enum class EngineKind { Auto, Ffq, Mbq };

std::string to_string(EngineKind kind);
/// "auto" | "ffq" | "mbq"; throws ConfigError otherwise.
EngineKind parse_engine(const std::string& name);

struct EngineOptions {
  EngineKind engine = EngineKind::Auto;
  int site_cap = mbq::kDefaultSiteCap;
  ZeroModePolicy zero_mode = ZeroModePolicy::Reject;
  ffq::PropagationOptions ffq;
  mbq::EvolveOptions mbq;
};

/// Picks the engine for a spec: auto means ffq for lambda = 0 without outer
/// segments, mbq otherwise. Throws ConfigError on impossible requests.
EngineKind resolve_engine(EngineKind requested, const ValidatedSpec& vs, int site_cap);

/// Everything measurable at one time, from the four evolved inputs
/// psi_x = U(t) (|x>_AB (x) env), x = two_qubit_index(a, b).
///
/// Any qubit input sum_x c_x |x> follows by linearity.
struct GateSnapshot {
  double t = 0.0;
  /// kernel[y][x](i, j) = <psi_y| (|j><i|)_AB |psi_x>
  std::array<std::array<Mat4, 4>, 4> kernel{};
  /// bus_gram(y, x) = sum_q <psi_y|ref (x) q><ref (x) q|psi_x>, ref = bus ground state.
  Mat4 bus_gram = Mat4::Zero();

  /// Reduced two-qubit state for qubit input c.
  Mat4 rdm(const Vec4& c) const;
  /// <ref|rho_bus|ref> for qubit input c.
  double bus_fidelity(const Vec4& c) const;
  /// Process map through the 16 tomography inputs.
  maps::ProcessMap process_map(const std::string& engine) const;
};

/// Weighted pure environment states (lattice register for mbq).
using DenseEnsemble = std::vector<std::pair<double, CVector>>;

class GateSimulator {
 public:
  virtual ~GateSimulator() = default;

  /// Bus in its ground state, qubits attached at t = 0 under the schedule.
  static std::unique_ptr<GateSimulator> create(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                               const EngineOptions& options);
  /// ffq with a given environment determinant (lattice orbitals, qubits empty).
  static std::unique_ptr<GateSimulator> create_ffq(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                                   const CMatrix& environment, int parity_p,
                                                   const EngineOptions& options);
  /// mbq with an environment ensemble over layout.lattice_sites().
  static std::unique_ptr<GateSimulator> create_mbq(const ValidatedSpec& vs, const ControlSchedule& schedule,
                                                   DenseEnsemble environment, int parity_p,
                                                   const EngineOptions& options);

  virtual EngineKind kind() const = 0;
  /// Parity exponent of the prepared bus state.
  virtual int parity_p() const = 0;
  /// Snapshots at the given times (sorted ascending internally, t >= 0).
  virtual std::vector<GateSnapshot> run(const std::vector<double>& times) const = 0;
};

/// Bus ground state of the mbq engine as a lattice-register vector (outer
/// segments empty) plus its parity.
std::pair<CVector, int> mbq_bus_environment(const ValidatedSpec& vs, const EngineOptions& options);

}  // namespace busgate
