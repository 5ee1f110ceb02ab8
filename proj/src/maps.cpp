#include "busgate/maps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace busgate::maps {

namespace {

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Vec4 basis_vector(int k) {
  Vec4 v = Vec4::Zero();
  v(k) = 1.0;
  return v;
}

}  // namespace

std::vector<TomographyInput> tomography_inputs() {
  std::vector<TomographyInput> in;
  for (int k = 0; k < 4; ++k) in.push_back({basis_vector(k), "|" + std::to_string(k) + ">"});
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& p : kPairs) {
    const int k = p[0], l = p[1];
    const std::string kl = std::to_string(k) + std::to_string(l);
    in.push_back({r * (basis_vector(k) + basis_vector(l)), "u" + kl});
    in.push_back({r * (basis_vector(k) + kI * basis_vector(l)), "v" + kl});
  }
  return in;
}

ProcessMap assemble_process_map(const std::array<Mat4, 16>& outputs, double t, const std::string& engine) {
  std::array<std::array<Mat4, 4>, 4> o;  // o[k][l] = eps applied to |k><l|
  for (int k = 0; k < 4; ++k) o[k][k] = outputs[k];
  for (int p = 0; p < 6; ++p) {
    const int k = kPairs[p][0], l = kPairs[p][1];
    const Mat4& ou = outputs[4 + 2 * p];
    const Mat4& ov = outputs[5 + 2 * p];
    const Mat4 diag = o[k][k] + o[l][l];
    o[k][l] = ou + kI * ov - 0.5 * (1.0 + kI) * diag;
    o[l][k] = ou - kI * ov - 0.5 * (1.0 - kI) * diag;
  }
  ProcessMap m;
  m.t = t;
  m.engine = engine;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) m(i, j, k, l) = o[k][l](i, j);

  const auto inv = check_invariants(m);
  if (inv.trace > 1e-6)
    throw NumericalError("process map violates trace preservation by " + std::to_string(inv.trace) +
                         " at t = " + std::to_string(t));
  return m;
}

MapInvariants check_invariants(const ProcessMap& map) {
  MapInvariants r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          r.hermiticity = std::max(r.hermiticity, std::abs(map(i, j, k, l) - std::conj(map(j, i, l, k))));
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      cplx tr = 0.0;
      for (int i = 0; i < 4; ++i) tr += map(i, i, k, l);
      r.trace = std::max(r.trace, std::abs(tr - (k == l ? 1.0 : 0.0)));
    }
  const Mat16 c = choi(map);
  Eigen::SelfAdjointEigenSolver<Mat16> es(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
  r.choi_min = es.eigenvalues()(0);
  return r;
}

double average_gate_fidelity(const ProcessMap& map, const Mat4& g) {
  cplx s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += std::conj(g(i, k)) * map(i, j, k, l) * g(j, l);
  return (std::real(s) + 4.0) / 20.0;
}

double average_gate_fidelity(const ProcessMap& map, const IdealGate& gate) {
  return average_gate_fidelity(map, gate.matrix());
}

ProcessMap unitary_channel(const Mat4& u) {
  if ((u.adjoint() * u - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw ConfigError("unitary_channel: matrix is not unitary");
  ProcessMap m;
  m.engine = "unitary";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) m(i, j, k, l) = u(i, k) * std::conj(u(j, l));
  return m;
}

ProcessMap identity_channel() { return unitary_channel(Mat4::Identity()); }

ProcessMap depolarizing_channel() {
  ProcessMap m;
  m.engine = "depolarizing";
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) m(i, i, k, k) = 0.25;
  return m;
}

ProcessMap compose(const ProcessMap& outer, const ProcessMap& inner) {
  ProcessMap m;
  m.e = outer.e * inner.e;
  m.t = outer.t;
  m.engine = outer.engine;
  return m;
}

Eigen::Matrix<cplx, 16, 16> choi(const ProcessMap& map) {
  Mat16 c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) c(4 * i + k, 4 * j + l) = map(i, j, k, l);
  return c;
}

Mat4 apply(const ProcessMap& map, const Mat4& rho) {
  Mat4 out = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) out(i, j) += map(i, j, k, l) * rho(k, l);
  return out;
}

double concurrence(const Mat4& rho) {
  Mat4 yy = Mat4::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const Mat4 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> es(herm);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  const Mat4 sq = es.eigenvectors() * ev.cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  const Mat4 tilde = yy * herm.conjugate() * yy;
  const Mat4 r = sq * tilde * sq;
  Eigen::SelfAdjointEigenSolver<Mat4> er(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::Vector4d lam = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

Mat4 projector(const Vec4& psi) { return psi * psi.adjoint(); }

Vec4 plus_plus() { return Vec4::Constant(0.5); }

}  // namespace busgate::maps
