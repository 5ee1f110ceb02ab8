#include "busgate/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace busgate {

double wrap_phase(double angle) {
  double w = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

double phase_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

// ---------------------------------------------------------------------------

std::vector<int> Layout::lattice_sites() const {
  std::vector<int> sites;
  for (int s = 0; s < total_sites; ++s)
    if (s != qubit_a && s != qubit_b) sites.push_back(s);
  return sites;
}

std::vector<int> Layout::bus_sites() const {
  std::vector<int> sites;
  for (int s = bus_first; s <= bus_last; ++s) sites.push_back(s);
  return sites;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "; " : "") << parts[i];
  return os.str();
}

}  // namespace

SpecError::SpecError(std::vector<std::string> violations)
    : ConfigError("invalid chain spec: " + join(violations)), violations_(std::move(violations)) {}

ValidatedSpec validate_spec(const ChainSpec& spec) {
  std::vector<std::string> errors;
  if (spec.n_bus < 1) errors.emplace_back("n_bus >= 1 required (got " + std::to_string(spec.n_bus) + ")");
  if (!(spec.j > 0.0)) errors.emplace_back("j > 0 required");
  if (!(spec.j0 >= 0.0)) errors.emplace_back("j0 >= 0 required");
  if (!std::isfinite(spec.lambda)) errors.emplace_back("lambda must be finite");
  if (spec.extra_left < 0) errors.emplace_back("extra_left >= 0 required");
  if (spec.extra_right < 0) errors.emplace_back("extra_right >= 0 required");
  if (!errors.empty()) throw SpecError(std::move(errors));

  Layout lay;
  lay.outer_left_first = 0;
  lay.qubit_a = spec.extra_left;
  lay.bus_first = lay.qubit_a + 1;
  lay.bus_last = lay.qubit_a + spec.n_bus;
  lay.qubit_b = lay.bus_last + 1;
  lay.outer_right_first = lay.qubit_b + 1;
  lay.total_sites = lay.qubit_b + 1 + spec.extra_right;

  std::set<int> seen;
  for (const auto& f : spec.cut_fields) {
    if (!lay.is_outer_site(f.site) || f.site < 0 || f.site >= lay.total_sites)
      errors.emplace_back("cut field site " + std::to_string(f.site) + " is not inside an outer segment");
    if (!std::isfinite(f.strength)) errors.emplace_back("cut field strength must be finite");
    if (!seen.insert(f.site).second)
      errors.emplace_back("duplicate cut field site " + std::to_string(f.site));
  }
  if (!errors.empty()) throw SpecError(std::move(errors));

  auto& b = lay.bonds;
  for (int s = 0; s + 1 < lay.qubit_a; ++s) b.push_back({s, s + 1, BondKind::Outer});
  if (spec.extra_left > 0) b.push_back({lay.qubit_a - 1, lay.bus_first, BondKind::Outer});
  b.push_back({lay.qubit_a, lay.bus_first, BondKind::Qubit});
  for (int s = lay.bus_first; s < lay.bus_last; ++s) b.push_back({s, s + 1, BondKind::Bus});
  b.push_back({lay.bus_last, lay.qubit_b, BondKind::Qubit});
  if (spec.extra_right > 0) b.push_back({lay.bus_last, lay.outer_right_first, BondKind::Outer});
  for (int s = lay.outer_right_first; s + 1 < lay.total_sites; ++s) b.push_back({s, s + 1, BondKind::Outer});

  return {spec, lay};
}

// ---------------------------------------------------------------------------

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw ConfigError("piecewise-linear profile needs at least one knot");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i].first > knots_[i - 1].first))
      throw ConfigError("piecewise-linear knots must have strictly increasing times");
}

PiecewiseLinear PiecewiseLinear::constant(double value) { return PiecewiseLinear({{0.0, value}}); }

PiecewiseLinear PiecewiseLinear::ramp(double t0, double value0, double t1, double value1) {
  if (!(t1 > t0)) return constant(value1);
  return PiecewiseLinear({{t0, value0}, {t1, value1}});
}

double PiecewiseLinear::operator()(double t) const {
  if (knots_.empty()) return 0.0;
  if (t <= knots_.front().first) return knots_.front().second;
  if (t >= knots_.back().first) return knots_.back().second;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const auto& k) { return x < k.first; });
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

bool PiecewiseLinear::is_constant() const {
  return std::all_of(knots_.begin(), knots_.end(),
                     [&](const auto& k) { return k.second == knots_.front().second; });
}

std::vector<double> PiecewiseLinear::breakpoints(double t0, double t1) const {
  std::vector<double> out;
  for (const auto& k : knots_)
    if (k.first > t0 && k.first < t1) out.push_back(k.first);
  return out;
}

bool PiecewiseLinear::constant_on(double t0, double t1) const {
  const double v = (*this)(t0);
  if ((*this)(t1) != v) return false;
  for (double t : breakpoints(t0, t1))
    if ((*this)(t) != v) return false;
  return true;
}

ControlSchedule ControlSchedule::sudden(double j0, double horizon) {
  ControlSchedule s;
  s.j0_profile = PiecewiseLinear::constant(j0);
  s.horizon = horizon;
  return s;
}

bool ControlSchedule::constant_on(double t0, double t1) const {
  if (!j0_profile.constant_on(t0, t1)) return false;
  return std::all_of(field_profiles.begin(), field_profiles.end(),
                     [&](const auto& kv) { return kv.second.constant_on(t0, t1); });
}

std::vector<double> ControlSchedule::breakpoints(double t0, double t1) const {
  std::vector<double> out = j0_profile.breakpoints(t0, t1);
  for (const auto& [site, p] : field_profiles) {
    auto more = p.breakpoints(t0, t1);
    out.insert(out.end(), more.begin(), more.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double bond_coupling(const Bond& bond, const ChainSpec& spec, const ControlSchedule& schedule, double t) {
  return bond.kind == BondKind::Qubit ? schedule.j0_profile(t) : spec.j;
}

double site_field(int site, const ChainSpec& spec, const ControlSchedule& schedule, double t) {
  double h = 0.0;
  for (const auto& f : spec.cut_fields)
    if (f.site == site) h += f.strength * spec.j;
  if (auto it = schedule.field_profiles.find(site); it != schedule.field_profiles.end()) h += it->second(t);
  return h;
}

InstantControls controls_at(const ValidatedSpec& vs, const ControlSchedule& schedule, double t) {
  InstantControls c;
  c.couplings.reserve(vs.layout.bonds.size());
  for (const auto& b : vs.layout.bonds) c.couplings.push_back(bond_coupling(b, vs.spec, schedule, t));
  c.fields.resize(vs.layout.total_sites);
  for (int s = 0; s < vs.layout.total_sites; ++s) c.fields[s] = site_field(s, vs.spec, schedule, t);
  return c;
}

InstantControls blend(double wa, const InstantControls& a, double wb, const InstantControls& b) {
  InstantControls c = a;
  for (std::size_t i = 0; i < c.couplings.size(); ++i) c.couplings[i] = wa * a.couplings[i] + wb * b.couplings[i];
  for (std::size_t i = 0; i < c.fields.size(); ++i) c.fields[i] = wa * a.fields[i] + wb * b.fields[i];
  return c;
}

MagnusStep magnus_step(const ValidatedSpec& vs, const ControlSchedule& schedule, double t, double h) {
  const double r3 = std::sqrt(3.0);
  const double a1 = (3.0 - 2.0 * r3) / 12.0, a2 = (3.0 + 2.0 * r3) / 12.0;
  const auto h1 = controls_at(vs, schedule, t + (0.5 - r3 / 6.0) * h);
  const auto h2 = controls_at(vs, schedule, t + (0.5 + r3 / 6.0) * h);
  // a1 + a2 = 1/2, so each factor is a full Hamiltonian run for h/2.
  return {blend(2.0 * a2, h1, 2.0 * a1, h2), blend(2.0 * a1, h1, 2.0 * a2, h2)};
}

// ---------------------------------------------------------------------------

double optimal_coupling_estimate(int n, double j) { return 1.05 * j * std::pow(static_cast<double>(n), -1.0 / 6.0); }

double transfer_time_estimate(int n, double j) {
  return (0.25 * n + 0.52 * std::cbrt(static_cast<double>(n))) / j;
}

Mat4 IdealGate::matrix() const {
  Mat4 g = Mat4::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      g(two_qubit_index(b, a), two_qubit_index(a, b)) = std::polar(1.0, phases[two_qubit_index(a, b)]);
  return g;
}

double transfer_phase(int n) { return wrap_phase(-kPi * (n + 1) / 2.0); }

IdealGate gate_from_alpha(double alpha, int parity_p) {
  IdealGate g;
  g.alpha_n = wrap_phase(alpha);
  g.parity_p = parity_p;
  const double phi_swap = wrap_phase((parity_p + 1) * kPi - alpha);
  g.phases = {0.0, phi_swap, phi_swap, wrap_phase(kPi - 2.0 * alpha)};
  return g;
}

IdealGate ideal_gate(int n, int parity_p) { return gate_from_alpha(transfer_phase(n), parity_p); }

}  // namespace busgate
