#pragma once

#include <functional>

#include "busgate/common.hpp"

namespace busgate::krylov {

/// y = H x for a Hermitian operator. y is sized by the caller.
using MatVec = std::function<void(const CVector& x, CVector& y)>;

struct ExpOptions {
  int dimension = 30;
  double tolerance = 1e-10;  // a-posteriori error bound per substep
  int max_substeps = 1000000;
};

struct ExpStats {
  int substeps = 0;
  int matvecs = 0;
};

/// exp(-i H t) v with adaptive substeps. Each substep reuses one Lanczos basis
/// (full reorthogonalization) and shrinks its length until
/// beta_m |e_m^T exp(-i dt T_m) e_1| ||v|| < tolerance.
CVector expmv(const MatVec& h, const CVector& v, double t, const ExpOptions& options = {},
              ExpStats* stats = nullptr);

struct EigenOptions {
  int basis = 120;           // Lanczos vectors per restart cycle
  double tolerance = 1e-10;  // residual norm ||H x - E x||
  int max_restarts = 200;
  int dense_threshold = 512;  // dimensions up to this are diagonalized densely
};

struct EigenPair {
  double value = 0.0;
  CVector vector;
  double residual = 0.0;
};

/// Lowest eigenpair by explicitly restarted Lanczos from `start`.
/// Throws NumericalError when the residual target is not met.
EigenPair lowest_eigenpair(const MatVec& h, const CVector& start, const EigenOptions& options = {});

/// Same, densely, for an explicit Hermitian matrix.
EigenPair lowest_eigenpair(const CMatrix& h);

}  // namespace busgate::krylov
