#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "busgate/engines.hpp"
#include "busgate/maps.hpp"
#include "busgate/model.hpp"
#include "busgate/optimize.hpp"

namespace busgate::protocols {

/// Where t* comes from when the caller does not give it.
enum class Checkpoint { Optimized, Formula };
enum class RepeatMode { Reprepare, Continuous };

std::string to_string(Checkpoint c);
std::string to_string(RepeatMode m);
Checkpoint parse_checkpoint(const std::string& s);
RepeatMode parse_repeat_mode(const std::string& s);

/// (j0, t*) for a bus length: the transfer optimum, or the closed-form estimates.
struct OperatingPoint {
  double j0 = 0.0;
  double t_star = 0.0;
  Checkpoint source = Checkpoint::Optimized;
};
OperatingPoint operating_point(int n, double j, Checkpoint source);

struct GateRunResult {
  std::vector<double> times;
  std::vector<double> f_g;
  std::vector<double> f_m;  // bus fidelity for the |++> input
  std::vector<double> checkpoint_times;
  std::vector<maps::ProcessMap> checkpoint_maps;
  std::optional<cplx> transfer;  // U_{B,A}(t*) when lambda = 0
  double t_star = 0.0;
  double j0 = 0.0;
  int parity_p = 0;
  IdealGate gate;
  EngineKind engine = EngineKind::Auto;
};

/// Sudden switch-on of J0 at t = 0 with the bus in its ground state. F_G is
/// measured against ideal_gate(N, p) with p of the prepared bus.
GateRunResult run_gate(const ChainSpec& spec, const EngineOptions& options, double j0,
                       const std::vector<double>& times, const std::vector<double>& checkpoints, double t_star);

struct RepeatRow {
  int k = 0;
  double f_g = 0.0;
  double f_m = 0.0;
};

/// k uses of the bus with J0 held at j0.
///
/// Reprepare: before every use both qubits are reset to |++>, the bus keeps
/// its (mixed) state; use k is compared with G. Needs the mbq engine.
/// Continuous: one evolution to k t*, compared with G^k.
std::vector<RepeatRow> run_repeated(const ChainSpec& spec, const EngineOptions& options, double j0, double t_star,
                                    int k_max, RepeatMode mode);

/// F_G(t*) when J0 rises linearly from 0 to j0 over tau. With retime the
/// peak time is searched in [t*, t* + tau] instead of using t*.
double run_gradual(const ChainSpec& spec, const EngineOptions& options, double j0, double t_star, double tau,
                   bool retime = false);

std::vector<std::pair<double, double>> sweep_gradual(const ChainSpec& spec, const EngineOptions& options,
                                                     double j0, double t_star, const std::vector<double>& taus,
                                                     bool retime = false);

struct CutOptions {
  int outer = 4;            // sites on each side of the bus
  double delta_e = 30.0;    // final cut field, units of J
  double ramp_time = 100.0; // units of 1/J
  double glue_time = 100.0; // 0 disables the glue phase
  double sample_dt = 1.0;
};

struct CutRunResult {
  std::vector<double> times;
  std::vector<double> f_cut;   // bus-block ground-state fidelity
  std::vector<double> f_glue;  // whole-lattice ground-state fidelity
  double f_cut_start = 0.0;
  double f_cut_end = 0.0;
  double f_glue_end = 0.0;
  ffq::SlaterDeterminant final_cut_state;  // state when the cut ramp ends
};

/// Adiabatic cut (field ramp 0 -> delta_e on the two sites flanking the
/// qubits) starting from the whole-lattice ground state, then the reverse
/// glue ramp. Free-fermion engine, qubits empty and decoupled throughout.
CutRunResult run_cut_glue(const ChainSpec& bus_spec, const CutOptions& options,
                          const ffq::PropagationOptions& prop = {});

/// Chain spec with outer segments and the cut sites marked (fields zero).
ValidatedSpec cut_geometry(const ChainSpec& bus_spec, int outer);

struct PostCutGate {
  double delta_e = 0.0;
  double f_g = 0.0;           // outer segments retained in the dynamics
  double f_g_isolated = 0.0;  // same bus without outer segments
  int n_bus = 0;
};

/// Cut ramp to delta_e, then the gate with the field held and the outer
/// segments still attached (dense engine).
PostCutGate run_post_cut_gate(const ChainSpec& bus_spec, const CutOptions& options, double j0, double t_star,
                              const EngineOptions& engine_options);

/// Gate run per lambda (bus and qubit bonds share lambda), dense engine.
std::vector<std::pair<double, double>> sweep_lambda(const ChainSpec& spec, const EngineOptions& options, double j0,
                                                    double t_star, const std::vector<double>& lambdas);

/// F_G at one time from a snapshot.
double gate_fidelity(const GateSnapshot& s, const IdealGate& gate, EngineKind engine);

}  // namespace busgate::protocols
