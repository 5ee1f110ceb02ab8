#pragma once

// Brute-force spin/fermion operators on small registers, written without the
// library's basis or Hamiltonian code. Site 0 is the most significant bit and
// a set bit is an occupied fermion (down spin).

#include <cstdint>
#include <random>

#include "busgate/common.hpp"

namespace oracle {

using busgate::CMatrix;
using busgate::CVector;
using busgate::cplx;

inline std::uint32_t bit(int sites, int x) { return std::uint32_t{1} << (sites - 1 - x); }

/// c^dagger_x with the string over sites < x.
inline CMatrix creator(int sites, int x) {
  const std::uint32_t dim = 1u << sites;
  CMatrix c = CMatrix::Zero(dim, dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    if (s & bit(sites, x)) continue;
    int left = 0;
    for (int k = 0; k < x; ++k) left += (s & bit(sites, k)) ? 1 : 0;
    c(s | bit(sites, x), s) = (left % 2) ? -1.0 : 1.0;
  }
  return c;
}

inline CMatrix pauli_on(int sites, int x, char which) {
  const std::uint32_t dim = 1u << sites;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const bool down = s & bit(sites, x);
    switch (which) {
      case 'x': m(s ^ bit(sites, x), s) = 1.0; break;
      case 'y': m(s ^ bit(sites, x), s) = down ? cplx(0, -1) : cplx(0, 1); break;
      case 'z': m(s, s) = down ? -1.0 : 1.0; break;
    }
  }
  return m;
}

/// sum c (XX + YY + lam ZZ) over nearest neighbours of an open chain, minus sum h_x Z_x.
inline CMatrix xxz_chain(const std::vector<double>& couplings, double lam, const std::vector<double>& fields = {}) {
  const int sites = static_cast<int>(couplings.size()) + 1;
  const std::uint32_t dim = 1u << sites;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int i = 0; i + 1 < sites; ++i) {
    h += couplings[i] * (pauli_on(sites, i, 'x') * pauli_on(sites, i + 1, 'x') +
                         pauli_on(sites, i, 'y') * pauli_on(sites, i + 1, 'y') +
                         lam * pauli_on(sites, i, 'z') * pauli_on(sites, i + 1, 'z'));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) h -= fields[i] * pauli_on(sites, static_cast<int>(i), 'z');
  return h;
}

/// b^dagger_1 ... b^dagger_M |vac> for orbital columns b_j.
inline CVector slater_state(const CMatrix& orbitals) {
  const int sites = static_cast<int>(orbitals.rows());
  CVector v = CVector::Zero(1 << sites);
  v(0) = 1.0;
  for (Eigen::Index j = orbitals.cols() - 1; j >= 0; --j) {
    CMatrix b = CMatrix::Zero(1 << sites, 1 << sites);
    for (int x = 0; x < sites; ++x) b += orbitals(x, j) * creator(sites, x);
    v = b * v;
  }
  return v;
}

inline CMatrix expm_hermitian(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector ph(h.rows());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline CMatrix random_orbitals(int sites, int particles, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMatrix a(sites, particles);
  for (int i = 0; i < sites; ++i)
    for (int j = 0; j < particles; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(sites, particles);
}

inline busgate::Mat4 random_unitary4(std::mt19937& rng) {
  std::normal_distribution<double> g;
  busgate::Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<busgate::Mat4> qr(a);
  return qr.householderQ();
}

}  // namespace oracle
