#pragma once

#include <array>
#include <string>
#include <vector>

#include "busgate/common.hpp"
#include "busgate/model.hpp"

namespace busgate::maps {

using Mat16 = Eigen::Matrix<cplx, 16, 16>;

/// Two-qubit channel eps_{ij,kl}: <i|rho_out|j> = sum_kl eps_{ij,kl} <k|rho_in|l>.
/// Stored as a 16x16 matrix with row 4i + j and column 4k + l.
struct ProcessMap {
  Mat16 e = Mat16::Zero();
  double t = 0.0;
  std::string engine;

  cplx operator()(int i, int j, int k, int l) const { return e(4 * i + j, 4 * k + l); }
  cplx& operator()(int i, int j, int k, int l) { return e(4 * i + j, 4 * k + l); }
};

/// Deviations from the channel invariants.
struct MapInvariants {
  double hermiticity = 0.0;  // max |eps_{ij,kl} - conj(eps_{ji,lk})|
  double trace = 0.0;        // max |sum_i eps_{ii,kl} - delta_kl|
  double choi_min = 0.0;     // smallest Choi eigenvalue

  bool ok(double herm_tol = 1e-9, double trace_tol = 1e-8, double cp_tol = 1e-8) const {
    return hermiticity <= herm_tol && trace <= trace_tol && choi_min >= -cp_tol;
  }
};

struct TomographyInput {
  Vec4 state;
  std::string label;
};

/// The four basis states followed by u = (|k> + |l>)/sqrt2 and
/// v = (|k> + i|l>)/sqrt2 for each pair k < l, in lexicographic pair order.
std::vector<TomographyInput> tomography_inputs();

/// Builds eps from the 16 outputs (ordered as tomography_inputs()) through
///   |k><l| = |u><u| + i|v><v| - (1+i)/2 (|k><k| + |l><l|).
/// Throws NumericalError when trace preservation is off by more than 1e-6.
ProcessMap assemble_process_map(const std::array<Mat4, 16>& outputs, double t, const std::string& engine = "");

MapInvariants check_invariants(const ProcessMap& map);

/// (sum G*_ik eps_{ij,kl} G_jl + 4) / 20.
double average_gate_fidelity(const ProcessMap& map, const Mat4& gate);
double average_gate_fidelity(const ProcessMap& map, const IdealGate& gate);

/// eps_{ij,kl} = U_ik U*_jl. Throws ConfigError for non-unitary U.
ProcessMap unitary_channel(const Mat4& u);
ProcessMap identity_channel();
/// rho -> Tr(rho) I / 4.
ProcessMap depolarizing_channel();

/// outer after inner.
ProcessMap compose(const ProcessMap& outer, const ProcessMap& inner);

/// C[(i,k),(j,l)] = eps_{ij,kl}, row 4i + k and column 4j + l.
Eigen::Matrix<cplx, 16, 16> choi(const ProcessMap& map);

Mat4 apply(const ProcessMap& map, const Mat4& rho);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const Mat4& rho);

/// |psi><psi|
Mat4 projector(const Vec4& psi);

/// (|0> + |1>)/sqrt2 on both qubits.
Vec4 plus_plus();

}  // namespace busgate::maps
