#include "busgate/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "busgate/ffq.hpp"
#include "busgate/model.hpp"

namespace busgate {

namespace {

struct Point {
  double j0 = 0.0;
  double t = 0.0;
  double value = -1.0;
  cplx amplitude;
};

constexpr double kTie = 1e-12;

// Larger value wins; near-equal values prefer smaller t, then smaller j0.
bool better(const Point& a, const Point& b) {
  if (a.value > b.value + kTie) return true;
  if (a.value < b.value - kTie) return false;
  if (a.t != b.t) return a.t < b.t;
  return a.j0 < b.j0;
}

template <class F>
Point golden(F&& eval, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  Point pc = eval(c), pd = eval(d);
  while (b - a > tol) {
    if (better(pc, pd)) {
      b = d;
      d = c;
      pd = pc;
      c = b - r * (b - a);
      pc = eval(c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + r * (b - a);
      pd = eval(d);
    }
  }
  Point best = better(pc, pd) ? pc : pd;
  for (double x : {lo, hi}) {
    Point p = eval(x);
    if (better(p, best)) best = p;
  }
  return best;
}

struct Box {
  double j0_lo, j0_hi, t_lo, t_hi;
};

struct Search {
  Point best;
  bool j0_edge = false;
  bool t_edge = false;
};

Point best_time(const ffq::TransferProfile& prof, double j0, const Box& box, const OptimizeOptions& opt) {
  const int steps = std::max(2, static_cast<int>(std::ceil((box.t_hi - box.t_lo) / opt.t_grid_step)));
  const double dt = (box.t_hi - box.t_lo) / steps;
  Point best;
  int best_k = 0;
  for (int k = 0; k <= steps; ++k) {
    const double t = box.t_lo + k * dt;
    const cplx u = prof(t);
    Point p{j0, t, std::abs(u), u};
    if (better(p, best)) {
      best = p;
      best_k = k;
    }
  }
  const double lo = box.t_lo + std::max(0, best_k - 1) * dt;
  const double hi = box.t_lo + std::min(steps, best_k + 1) * dt;
  return golden(
      [&](double t) {
        const cplx u = prof(t);
        return Point{j0, t, std::abs(u), u};
      },
      lo, hi, opt.tolerance);
}

Search search(const ValidatedSpec& vs, const Box& box, const OptimizeOptions& opt) {
  auto eval = [&](double j0) { return best_time(ffq::transfer_profile(vs, j0), j0, box, opt); };
  const int g = std::max(2, opt.j0_grid);
  const double dj = (box.j0_hi - box.j0_lo) / (g - 1);
  Point best;
  int best_k = 0;
  for (int k = 0; k < g; ++k) {
    Point p = eval(box.j0_lo + k * dj);
    if (better(p, best)) {
      best = p;
      best_k = k;
    }
  }
  const double lo = box.j0_lo + std::max(0, best_k - 1) * dj;
  const double hi = box.j0_lo + std::min(g - 1, best_k + 1) * dj;
  Search s;
  s.best = golden(eval, lo, hi, opt.tolerance);
  const double eps = 1e-6;
  s.j0_edge = s.best.j0 <= box.j0_lo + eps || s.best.j0 >= box.j0_hi - eps;
  s.t_edge = s.best.t <= box.t_lo + eps || s.best.t >= box.t_hi - eps;
  return s;
}

}  // namespace

Optimum optimize(int n, double j, const OptimizeOptions& opt) {
  if (n < 1) throw ConfigError("optimize: n >= 1 required");
  if (!(j > 0.0)) throw ConfigError("optimize: j > 0 required");
  if (!(opt.j0_lo > 0.0) || !(opt.j0_hi > opt.j0_lo)) throw ConfigError("optimize: invalid j0 box");
  if (!(opt.t_lo_factor > 0.0) || !(opt.t_hi_factor > opt.t_lo_factor)) throw ConfigError("optimize: invalid t box");
  ChainSpec spec;
  spec.n_bus = n;  // searched with J = 1, rescaled at the end
  const auto vs = validate_spec(spec);
  const double t_est = transfer_time_estimate(n, 1.0);  // in units of 1/J

  Box box{opt.j0_lo, opt.j0_hi, opt.t_lo_factor * t_est, opt.t_hi_factor * t_est};
  Search s = search(vs, box, opt);
  bool widened = false;
  if ((s.j0_edge || s.t_edge) && opt.allow_widen) {
    widened = true;
    if (s.j0_edge) box = {0.5 * box.j0_lo, 1.5 * box.j0_hi, box.t_lo, box.t_hi};
    if (s.t_edge) box = {box.j0_lo, box.j0_hi, 0.75 * box.t_lo, 1.25 * box.t_hi};
    s = search(vs, box, opt);
  }

  Optimum o;
  o.n = n;
  o.j = j;
  o.j0_opt = s.best.j0 * j;
  o.t_opt = s.best.t / j;
  o.peak = s.best.value;
  o.amplitude = s.best.amplitude;
  o.boundary_hit = s.j0_edge || s.t_edge;
  o.widened = widened;
  return o;
}

Optimum optimize_time(int n, double j, double j0, const OptimizeOptions& opt) {
  if (n < 1) throw ConfigError("optimize: n >= 1 required");
  if (!(j > 0.0)) throw ConfigError("optimize: j > 0 required");
  if (!(j0 > 0.0)) throw ConfigError("optimize: j0 > 0 required");
  ChainSpec spec;
  spec.n_bus = n;
  const auto vs = validate_spec(spec);
  const double t_est = transfer_time_estimate(n, 1.0);
  Box box{j0 / j, j0 / j, opt.t_lo_factor * t_est, opt.t_hi_factor * t_est};
  const auto prof = ffq::transfer_profile(vs, j0 / j);
  Point p = best_time(prof, j0 / j, box, opt);
  const double eps = 1e-6;
  bool edge = p.t <= box.t_lo + eps || p.t >= box.t_hi - eps;
  bool widened = false;
  if (edge && opt.allow_widen) {
    widened = true;
    box.t_lo *= 0.75;
    box.t_hi *= 1.25;
    p = best_time(prof, j0 / j, box, opt);
    edge = p.t <= box.t_lo + eps || p.t >= box.t_hi - eps;
  }
  return {n, j, j0, p.t / j, p.value, p.amplitude, edge, widened};
}

ScalingFit fit_scaling(const std::vector<Optimum>& optima) {
  if (optima.size() < 6)
    throw ConfigError("fit_scaling needs at least 6 optima (got " + std::to_string(optima.size()) + ")");
  double nmin = optima.front().n, nmax = optima.front().n;
  for (const auto& o : optima) {
    nmin = std::min<double>(nmin, o.n);
    nmax = std::max<double>(nmax, o.n);
  }
  if (nmax < 10.0 * nmin) throw ConfigError("fit_scaling needs n values spanning at least one decade");

  const auto m = static_cast<Eigen::Index>(optima.size());
  RMatrix x1(m, 2), x2(m, 2);
  RVector y1(m), y2(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& o = optima[i];
    const double n = o.n;
    x1(i, 0) = 1.0;
    x1(i, 1) = std::log(n);
    y1(i) = std::log(o.j0_opt / o.j);
    x2(i, 0) = n;
    x2(i, 1) = std::cbrt(n);
    y2(i) = o.t_opt * o.j;
  }
  const RVector c1 = x1.colPivHouseholderQr().solve(y1);
  const RVector c2 = x2.colPivHouseholderQr().solve(y2);
  ScalingFit f;
  f.prefactor = std::exp(c1(0));
  f.exponent = c1(1);
  f.a = c2(0);
  f.b = c2(1);
  const RVector r1 = y1 - x1 * c1, r2 = y2 - x2 * c2;
  f.j0_residuals.assign(r1.data(), r1.data() + m);
  f.t_residuals.assign(r2.data(), r2.data() + m);
  return f;
}

}  // namespace busgate
