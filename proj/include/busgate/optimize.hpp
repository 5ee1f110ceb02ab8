#pragma once

#include <vector>

#include "busgate/common.hpp"

namespace busgate {

/// Best end-to-end transfer point for a bus of length n.
struct Optimum {
  int n = 0;
  double j = 1.0;
  double j0_opt = 0.0;
  double t_opt = 0.0;
  double peak = 0.0;  // |U_{B,A}(t_opt)|
  cplx amplitude;     // U_{B,A}(t_opt)
  bool boundary_hit = false;
  bool widened = false;
};

struct OptimizeOptions {
  double j0_lo = 0.2;  // in units of J
  double j0_hi = 1.5;
  double t_lo_factor = 0.8;  // times transfer_time_estimate
  double t_hi_factor = 1.3;
  int j0_grid = 27;
  double t_grid_step = 0.02;  // in units of 1/J
  double tolerance = 1e-9;
  bool allow_widen = true;
};

/// Maximizes |transfer_amplitude| over the (j0, t) box by a coarse grid and
/// golden-section refinement. Ties go to the smallest t, then the smallest j0.
/// A boundary optimum widens the box once; a second hit is only reported.
Optimum optimize(int n, double j = 1.0, const OptimizeOptions& options = {});

/// Peak of |transfer_amplitude| over the t window for a fixed j0 (the
/// j0 fields of the result echo the input).
Optimum optimize_time(int n, double j, double j0, const OptimizeOptions& options = {});

struct ScalingFit {
  double prefactor = 0.0;  // j0_opt = prefactor * J * N^exponent
  double exponent = 0.0;
  double a = 0.0;  // t_opt = (a N + b N^{1/3}) / J
  double b = 0.0;
  std::vector<double> j0_residuals;  // log-space
  std::vector<double> t_residuals;   // in units of 1/J
};

/// Least squares in log space for j0 and in linear space for t. Requires at
/// least six optima whose n span a decade.
ScalingFit fit_scaling(const std::vector<Optimum>& optima);

}  // namespace busgate
