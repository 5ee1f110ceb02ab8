#include "busgate/krylov.hpp"

#include <cmath>
#include <string>

namespace busgate::krylov {

namespace {

struct LanczosBasis {
  CMatrix v;  // n x (m + 1), last column is the residual direction
  RVector alpha;
  RVector beta;  // beta(k) couples v_k and v_{k+1}
  int m = 0;     // number of usable vectors
};

// Builds up to `dim` Lanczos vectors from unit vector q0 with full
// reorthogonalization. Stops early on an invariant subspace.
LanczosBasis build(const MatVec& h, const CVector& q0, int dim, int& matvecs) {
  const Eigen::Index n = q0.size();
  dim = static_cast<int>(std::min<Eigen::Index>(dim, n));
  LanczosBasis b;
  b.v.resize(n, dim + 1);
  b.alpha.resize(dim);
  b.beta.resize(dim);
  b.v.col(0) = q0;
  CVector w(n);
  for (int k = 0; k < dim; ++k) {
    h(b.v.col(k), w);
    ++matvecs;
    b.alpha(k) = std::real(b.v.col(k).dot(w));
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const CVector c = b.v.leftCols(k + 1).adjoint() * w;
      w -= b.v.leftCols(k + 1) * c;
    }
    b.beta(k) = w.norm();
    b.m = k + 1;
    if (b.beta(k) < 1e-13 * (std::abs(b.alpha(k)) + 1.0)) {
      b.beta(k) = 0.0;
      b.v.col(k + 1).setZero();
      break;
    }
    b.v.col(k + 1) = w / b.beta(k);
  }
  return b;
}

RMatrix tridiagonal(const LanczosBasis& b) {
  RMatrix t = RMatrix::Zero(b.m, b.m);
  for (int k = 0; k < b.m; ++k) {
    t(k, k) = b.alpha(k);
    if (k + 1 < b.m) t(k, k + 1) = t(k + 1, k) = b.beta(k);
  }
  return t;
}

}  // namespace

CVector expmv(const MatVec& h, const CVector& v, double t, const ExpOptions& options, ExpStats* stats) {
  if (t < 0.0) throw ConfigError("expmv expects t >= 0");
  CVector x = v;
  const double norm = v.norm();
  if (norm == 0.0 || t == 0.0) return x;

  double remaining = t;
  double dt = t;
  int substeps = 0, matvecs = 0;
  while (remaining > 0.0) {
    if (++substeps > options.max_substeps) throw NumericalError("Krylov propagation exceeded the substep limit");
    const double xn = x.norm();
    const auto b = build(h, x / xn, options.dimension, matvecs);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(tridiagonal(b));
    const RMatrix& s = es.eigenvectors();
    const RVector& e = es.eigenvalues();

    dt = std::min(dt, remaining);
    CVector y(b.m);
    for (int halvings = 0;; ++halvings) {
      CVector ph(b.m);
      for (int k = 0; k < b.m; ++k) ph(k) = std::polar(1.0, -e(k) * dt) * s(0, k);
      y = s.cast<cplx>() * ph;
      const double err = b.beta(b.m - 1) * std::abs(y(b.m - 1)) * xn;
      if (err < options.tolerance) break;
      if (halvings > 60) throw NumericalError("Krylov step size underflow");
      dt *= 0.5;
    }
    x = xn * (b.v.leftCols(b.m) * y);
    remaining -= dt;
    if (remaining < 1e-15 * t) remaining = 0.0;
    dt *= 1.5;
  }
  if (stats) {
    stats->substeps += substeps;
    stats->matvecs += matvecs;
  }
  return x;
}

EigenPair lowest_eigenpair(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  EigenPair p;
  p.value = es.eigenvalues()(0);
  p.vector = es.eigenvectors().col(0);
  p.residual = (h * p.vector - p.value * p.vector).norm();
  return p;
}

EigenPair lowest_eigenpair(const MatVec& h, const CVector& start, const EigenOptions& options) {
  const Eigen::Index n = start.size();
  if (n == 0) throw ConfigError("eigensolver called on an empty space");
  if (n <= options.dense_threshold) {
    CMatrix dense(n, n);
    CVector e = CVector::Zero(n), col(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      e.setZero();
      e(i) = 1.0;
      h(e, col);
      dense.col(i) = col;
    }
    return lowest_eigenpair(CMatrix(0.5 * (dense + dense.adjoint())));
  }

  CVector x = start.normalized();
  CVector hx(n);
  EigenPair best;
  int matvecs = 0;
  for (int cycle = 0; cycle < options.max_restarts; ++cycle) {
    const auto b = build(h, x, options.basis, matvecs);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(tridiagonal(b));
    x = b.v.leftCols(b.m) * es.eigenvectors().col(0).cast<cplx>();
    x.normalize();
    h(x, hx);
    const double value = std::real(x.dot(hx));
    const double res = (hx - value * x).norm();
    best = {value, x, res};
    if (res < options.tolerance) return best;
  }
  throw NumericalError("Lanczos did not converge: residual " + std::to_string(best.residual));
}

}  // namespace busgate::krylov
