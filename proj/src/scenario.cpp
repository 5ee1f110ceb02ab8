#include "busgate/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "busgate/maps.hpp"
#include "busgate/optimize.hpp"
#include "busgate/parallel.hpp"

namespace busgate {

using nlohmann::json;

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Gate: return "gate";
    case ScenarioKind::Repeat: return "repeat";
    case ScenarioKind::Gradual: return "gradual";
    case ScenarioKind::Cut: return "cut";
    case ScenarioKind::LambdaSweep: return "lambda-sweep";
    case ScenarioKind::Optimize: return "optimize";
    case ScenarioKind::Scaling: return "scaling";
  }
  return "gate";
}

ScenarioKind parse_scenario_kind(const std::string& s) {
  static const std::map<std::string, ScenarioKind> kinds{
      {"gate", ScenarioKind::Gate},         {"repeat", ScenarioKind::Repeat},
      {"gradual", ScenarioKind::Gradual},   {"cut", ScenarioKind::Cut},
      {"lambda-sweep", ScenarioKind::LambdaSweep}, {"optimize", ScenarioKind::Optimize},
      {"scaling", ScenarioKind::Scaling}};
  if (auto it = kinds.find(s); it != kinds.end()) return it->second;
  throw ConfigError("unknown scenario kind '" + s +
                    "' (expected gate, repeat, gradual, cut, lambda-sweep, optimize or scaling)");
}

namespace {

const std::set<std::string> kCommon{"kind", "name", "J", "engine", "cap_sites", "zero_mode", "output", "tolerances"};

std::set<std::string> allowed_keys(ScenarioKind k) {
  std::set<std::string> keys = kCommon;
  auto add = [&](std::initializer_list<const char*> more) { keys.insert(more.begin(), more.end()); };
  switch (k) {
    case ScenarioKind::Gate:
      add({"n_bus", "lambda", "j0", "t_star", "t_end", "dt", "checkpoints", "extra_left", "extra_right",
           "cut_fields"});
      break;
    case ScenarioKind::Repeat: add({"n_bus", "lambda", "j0", "t_star", "k_max", "mode"}); break;
    case ScenarioKind::Gradual: add({"n_bus", "lambda", "j0", "t_star", "taus", "tau_max", "tau_step", "retime"}); break;
    case ScenarioKind::Cut:
      add({"n_bus", "j0", "t_star", "outer", "delta_e", "ramp_time", "glue_time", "sample_dt", "post_cut_delta_e"});
      break;
    case ScenarioKind::LambdaSweep: add({"n_bus", "j0", "t_star", "lambdas"}); break;
    case ScenarioKind::Optimize: add({"n_bus"}); break;
    case ScenarioKind::Scaling: add({"n_values"}); break;
  }
  return keys;
}

std::string type_name(const json& j) { return j.type_name(); }

class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  void restrict_to(const std::set<std::string>& keys, const std::string& context) const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!keys.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + context);
  }

  bool has(const std::string& k) const { return obj_.contains(k); }
  const json& raw(const std::string& k) const { return obj_.at(k); }

  double number(const std::string& k) const {
    const auto& v = obj_.at(k);
    if (!v.is_number()) throw mismatch(k, "a number", v);
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where_ + ": '" + k + "' must be finite");
    return x;
  }
  double number(const std::string& k, double fallback) const { return has(k) ? number(k) : fallback; }

  int integer(const std::string& k) const {
    const auto& v = obj_.at(k);
    if (!v.is_number_integer()) throw mismatch(k, "an integer", v);
    return v.get<int>();
  }
  int integer(const std::string& k, int fallback) const { return has(k) ? integer(k) : fallback; }

  std::string string(const std::string& k) const {
    const auto& v = obj_.at(k);
    if (!v.is_string()) throw mismatch(k, "a string", v);
    return v.get<std::string>();
  }

  bool boolean(const std::string& k, bool fallback) const {
    if (!has(k)) return fallback;
    const auto& v = obj_.at(k);
    if (!v.is_boolean()) throw mismatch(k, "a boolean", v);
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& k) const {
    const auto& v = obj_.at(k);
    if (!v.is_array()) throw mismatch(k, "an array of numbers", v);
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw mismatch(k, "an array of numbers", v);
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& k) const {
    const auto& v = obj_.at(k);
    if (!v.is_array()) throw mismatch(k, "an array of integers", v);
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw mismatch(k, "an array of integers", v);
      out.push_back(x.get<int>());
    }
    return out;
  }

  ConfigError mismatch(const std::string& k, const std::string& want, const json& v) const {
    return ConfigError(where_ + ": '" + k + "' must be " + want + " (got " + type_name(v) + ")");
  }

 private:
  const json& obj_;
  std::string where_;
};

ZeroModePolicy parse_zero_mode(const std::string& s) {
  if (s == "reject") return ZeroModePolicy::Reject;
  if (s == "occupy") return ZeroModePolicy::Occupy;
  if (s == "leave") return ZeroModePolicy::Leave;
  throw ConfigError("unknown zero_mode '" + s + "' (expected reject, occupy or leave)");
}

void parse_tolerances(const json& doc, EngineOptions& e) {
  Reader r(doc, "tolerances");
  r.restrict_to({"ffq_ramp_step_change", "mbq_krylov_error", "mbq_ramp_step_change"}, "tolerances");
  auto positive = [&](const char* k, double fallback) {
    const double x = r.number(k, fallback);
    if (!(x > 0.0)) throw ConfigError(std::string("tolerances: '") + k + "' must be > 0");
    return x;
  };
  e.ffq.tolerance = positive("ffq_ramp_step_change", e.ffq.tolerance);
  e.mbq.krylov.tolerance = positive("mbq_krylov_error", e.mbq.krylov.tolerance);
  e.mbq.ramp_tolerance = positive("mbq_ramp_step_change", e.mbq.ramp_tolerance);
}

std::vector<double> tau_grid(double tau_max, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor(tau_max / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(i * step);
  return out;
}

std::vector<double> default_lambdas() {
  std::vector<double> out{-1e-3, 1e-3};
  for (int i = -4; i <= 4; ++i) out.push_back(0.05 * i);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  Reader top(doc, "scenario");
  if (!top.has("kind")) throw ConfigError("scenario: missing required key 'kind'");
  Scenario s;
  s.source = doc;
  s.kind = parse_scenario_kind(top.string("kind"));
  top.restrict_to(allowed_keys(s.kind), "a '" + to_string(s.kind) + "' scenario");
  s.name = top.has("name") ? top.string("name") : to_string(s.kind);
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("scenario: 'name' must be a plain file stem");

  s.spec.j = top.number("J", 1.0);
  if (!(s.spec.j > 0.0)) throw ConfigError("scenario: 'J' must be > 0");
  if (s.kind != ScenarioKind::Scaling) {
    if (!top.has("n_bus")) throw ConfigError("scenario: missing required key 'n_bus'");
    s.spec.n_bus = top.integer("n_bus");
    if (s.spec.n_bus < 1) throw ConfigError("scenario: 'n_bus' must be >= 1");
  }
  s.spec.lambda = top.number("lambda", 0.0);
  s.spec.extra_left = top.integer("extra_left", 0);
  s.spec.extra_right = top.integer("extra_right", 0);
  if (top.has("cut_fields")) {
    const auto& arr = top.raw("cut_fields");
    if (!arr.is_array()) throw top.mismatch("cut_fields", "an array of {site, strength}", arr);
    for (const auto& f : arr) {
      Reader fr(f, "cut_fields entry");
      fr.restrict_to({"site", "strength"}, "a cut_fields entry");
      if (!fr.has("site") || !fr.has("strength")) throw ConfigError("cut_fields entry needs 'site' and 'strength'");
      s.spec.cut_fields.push_back({fr.integer("site"), fr.number("strength")});
    }
  }

  if (top.has("engine")) s.engine.engine = parse_engine(top.string("engine"));
  s.engine.site_cap = top.integer("cap_sites", s.engine.site_cap);
  if (s.engine.site_cap < 1 || s.engine.site_cap > 30) throw ConfigError("scenario: 'cap_sites' must be in [1, 30]");
  if (top.has("zero_mode")) s.engine.zero_mode = parse_zero_mode(top.string("zero_mode"));
  if (top.has("tolerances")) parse_tolerances(top.raw("tolerances"), s.engine);
  if (top.has("output")) {
    Reader o(top.raw("output"), "output");
    o.restrict_to({"dir", "format"}, "output");
    if (o.has("dir")) s.out_dir = o.string("dir");
    if (o.has("format")) s.format = io::parse_format(o.string("format"));
  }

  if (top.has("j0")) {
    const auto& v = top.raw("j0");
    if (v.is_string()) {
      const auto m = v.get<std::string>();
      if (m == "optimized") s.j0_optimized = true;
      else if (m != "estimate") throw ConfigError("scenario: 'j0' must be a number, \"estimate\" or \"optimized\"");
    } else {
      s.j0 = top.number("j0");
      if (!(*s.j0 > 0.0)) throw ConfigError("scenario: 'j0' must be > 0");
    }
  }
  if (top.has("t_star")) {
    const auto& v = top.raw("t_star");
    if (v.is_string()) s.checkpoint = protocols::parse_checkpoint(v.get<std::string>());
    else {
      s.t_star = top.number("t_star");
      if (!(*s.t_star > 0.0)) throw ConfigError("scenario: 't_star' must be > 0");
    }
  }

  s.t_end = top.number("t_end", 0.0);
  s.dt = top.number("dt", 0.1);
  if (s.t_end < 0.0 || !(s.dt > 0.0)) throw ConfigError("scenario: need t_end >= 0 and dt > 0");
  if (top.has("checkpoints")) s.checkpoints = top.numbers("checkpoints");
  for (double t : s.checkpoints)
    if (t < 0.0) throw ConfigError("scenario: checkpoints must be >= 0");

  s.k_max = top.integer("k_max", 8);
  if (s.k_max < 1) throw ConfigError("scenario: 'k_max' must be >= 1");
  if (top.has("mode")) s.repeat_mode = protocols::parse_repeat_mode(top.string("mode"));

  if (top.has("taus") && (top.has("tau_max") || top.has("tau_step")))
    throw ConfigError("scenario: give either 'taus' or 'tau_max'/'tau_step', not both");
  if (top.has("taus")) s.taus = top.numbers("taus");
  else if (top.has("tau_max")) {
    const double step = top.number("tau_step", 0.1);
    if (!(step > 0.0) || top.number("tau_max") < 0.0) throw ConfigError("scenario: need tau_max >= 0, tau_step > 0");
    s.taus = tau_grid(top.number("tau_max"), step);
  } else if (top.has("tau_step")) throw ConfigError("scenario: 'tau_step' needs 'tau_max'");
  for (double t : s.taus)
    if (t < 0.0) throw ConfigError("scenario: taus must be >= 0");
  s.retime = top.boolean("retime", false);

  s.cut.outer = top.integer("outer", s.cut.outer);
  s.cut.delta_e = top.number("delta_e", s.cut.delta_e);
  s.cut.ramp_time = top.number("ramp_time", s.cut.ramp_time);
  s.cut.glue_time = top.number("glue_time", s.cut.glue_time);
  s.cut.sample_dt = top.number("sample_dt", s.cut.sample_dt);
  if (top.has("post_cut_delta_e")) s.post_cut_delta_e = top.numbers("post_cut_delta_e");

  s.lambdas = top.has("lambdas") ? top.numbers("lambdas") : default_lambdas();

  if (top.has("n_values")) s.n_values = top.integers("n_values");
  else s.n_values = {20, 40, 60, 80, 100, 150, 200};
  for (int n : s.n_values)
    if (n < 1) throw ConfigError("scenario: n_values must be >= 1");

  // Engine constraints that can be decided before running.
  const bool gate_like = s.kind == ScenarioKind::Gate || s.kind == ScenarioKind::Repeat ||
                         s.kind == ScenarioKind::Gradual || s.kind == ScenarioKind::LambdaSweep;
  if (gate_like) {
    ChainSpec probe = s.spec;
    const auto vs = validate_spec(probe);
    if (s.engine.engine == EngineKind::Ffq && s.spec.lambda != 0.0) throw ConfigError("ffq requires λ=0");
    if (s.kind != ScenarioKind::LambdaSweep) resolve_engine(s.engine.engine, vs, s.engine.site_cap);
  }
  if (s.kind == ScenarioKind::LambdaSweep && s.engine.engine == EngineKind::Ffq)
    throw ConfigError("ffq requires λ=0; a lambda sweep runs on mbq");
  if (s.kind == ScenarioKind::Repeat && s.repeat_mode == protocols::RepeatMode::Reprepare &&
      s.engine.engine == EngineKind::Ffq)
    throw ConfigError("repeat mode 'reprepare' requires the mbq engine");
  if (s.kind == ScenarioKind::Cut) {
    if (s.cut.outer < 1) throw ConfigError("scenario: 'outer' must be >= 1");
    if (s.cut.delta_e < 0.0 || s.cut.ramp_time < 0.0 || s.cut.glue_time < 0.0 || !(s.cut.sample_dt > 0.0))
      throw ConfigError("scenario: cut needs delta_e, ramp_time, glue_time >= 0 and sample_dt > 0");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

protocols::OperatingPoint resolve_operating_point(const Scenario& s, int n) {
  const double j = s.spec.j;
  protocols::OperatingPoint p;
  p.source = s.checkpoint;
  if (s.j0) p.j0 = *s.j0;
  else if (s.j0_optimized) {
    const auto o = optimize(n, j);
    p.j0 = o.j0_opt;
    if (!s.t_star && s.checkpoint == protocols::Checkpoint::Optimized) {
      p.t_star = o.t_opt;
      return p;
    }
  } else p.j0 = optimal_coupling_estimate(n, j);

  if (s.t_star) p.t_star = *s.t_star;
  else if (s.checkpoint == protocols::Checkpoint::Formula) p.t_star = transfer_time_estimate(n, j);
  else p.t_star = optimize_time(n, j, p.j0).t_opt;
  return p;
}

namespace {

std::string num(double x) { return io::format_number(x); }

ScenarioResult run_gate_scenario(const Scenario& s) {
  const auto op = resolve_operating_point(s, s.spec.n_bus);
  const double t_end = s.t_end > 0.0 ? s.t_end : 2.0 * op.t_star;
  std::vector<double> times;
  const int steps = static_cast<int>(std::floor(t_end / s.dt + 1e-9));
  for (int i = 0; i <= steps; ++i) times.push_back(i * s.dt);
  if (std::find(times.begin(), times.end(), op.t_star) == times.end()) times.push_back(op.t_star);
  std::sort(times.begin(), times.end());
  std::vector<double> checkpoints = s.checkpoints;
  if (checkpoints.empty()) checkpoints.push_back(op.t_star);

  const auto r = protocols::run_gate(s.spec, s.engine, op.j0, times, checkpoints, op.t_star);
  ScenarioResult out;
  out.engine = to_string(r.engine);
  io::Table t{s.name, {"t", "F_G", "F_M"}, {}};
  std::size_t at_star = 0;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    t.rows.push_back({r.times[i], r.f_g[i], r.f_m[i]});
    if (r.times[i] == op.t_star) at_star = i;
  }
  out.tables.push_back(std::move(t));

  io::Table m{s.name + "_maps", {"t", "i", "j", "k", "l", "re", "im"}, {}};
  for (std::size_t c = 0; c < r.checkpoint_maps.size(); ++c) {
    const auto& e = r.checkpoint_maps[c];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            m.rows.push_back({r.checkpoint_times[c], double(i), double(j), double(k), double(l),
                              std::real(e(i, j, k, l)), std::imag(e(i, j, k, l))});
  }
  out.tables.push_back(std::move(m));

  out.summary.push_back("F_G(t*)=" + num(r.f_g[at_star]));
  out.summary.push_back("F_M(t*)=" + num(r.f_m[at_star]));
  out.summary.push_back("j0=" + num(op.j0) + " t*=" + num(op.t_star) + " p=" + std::to_string(r.parity_p) +
                        " engine=" + out.engine);
  if (r.transfer) out.summary.push_back("arg U_BA(t*)=" + num(std::arg(*r.transfer)) +
                                        " |U_BA(t*)|=" + num(std::abs(*r.transfer)));
  for (std::size_t c = 0; c < r.checkpoint_maps.size(); ++c) {
    const Mat4 rho = maps::apply(r.checkpoint_maps[c], maps::projector(maps::plus_plus()));
    out.summary.push_back("concurrence(t=" + num(r.checkpoint_times[c]) + ", |++>)=" + num(maps::concurrence(rho)));
  }
  return out;
}

ScenarioResult run_repeat_scenario(const Scenario& s) {
  const auto op = resolve_operating_point(s, s.spec.n_bus);
  const auto rows = protocols::run_repeated(s.spec, s.engine, op.j0, op.t_star, s.k_max, s.repeat_mode);
  ScenarioResult out;
  if (s.repeat_mode == protocols::RepeatMode::Reprepare) out.engine = "mbq";
  else {
    ChainSpec c = s.spec;
    c.j0 = op.j0;
    out.engine = to_string(resolve_engine(s.engine.engine, validate_spec(c), s.engine.site_cap));
  }
  io::Table t{s.name, {"k", "F_G", "F_M"}, {}};
  for (const auto& r : rows) t.rows.push_back({double(r.k), r.f_g, r.f_m});
  out.tables.push_back(std::move(t));
  out.summary.push_back("mode=" + protocols::to_string(s.repeat_mode) + " j0=" + num(op.j0) +
                        " t*=" + num(op.t_star));
  for (const auto& r : rows)
    out.summary.push_back("k=" + std::to_string(r.k) + " F_G=" + num(r.f_g) + " F_M=" + num(r.f_m));
  return out;
}

ScenarioResult run_gradual_scenario(const Scenario& s) {
  const auto op = resolve_operating_point(s, s.spec.n_bus);
  const auto taus = s.taus.empty() ? tau_grid(3.0 * op.t_star, 0.1) : s.taus;
  const auto rows = protocols::sweep_gradual(s.spec, s.engine, op.j0, op.t_star, taus, s.retime);
  ScenarioResult out;
  ChainSpec c = s.spec;
  c.j0 = op.j0;
  out.engine = to_string(resolve_engine(s.engine.engine, validate_spec(c), s.engine.site_cap));
  io::Table t{s.name, {"tau", "F_G"}, {}};
  for (const auto& [tau, f] : rows) t.rows.push_back({tau, f});
  out.tables.push_back(std::move(t));
  out.summary.push_back("j0=" + num(op.j0) + " t*=" + num(op.t_star) + " points=" + std::to_string(rows.size()));
  return out;
}

ScenarioResult run_cut_scenario(const Scenario& s) {
  const auto r = protocols::run_cut_glue(s.spec, s.cut, s.engine.ffq);
  ScenarioResult out;
  out.engine = "ffq";
  io::Table t{s.name, {"t", "F_M_cut", "F_glue"}, {}};
  for (std::size_t i = 0; i < r.times.size(); ++i) t.rows.push_back({r.times[i], r.f_cut[i], r.f_glue[i]});
  out.tables.push_back(std::move(t));
  out.summary.push_back("F_M_cut(0)=" + num(r.f_cut_start) + " F_M_cut(end of cut)=" + num(r.f_cut_end) +
                        " F_glue(end)=" + num(r.f_glue_end));
  if (!s.post_cut_delta_e.empty()) {
    out.engine = "ffq+mbq";
    const auto op = resolve_operating_point(s, s.spec.n_bus);
    io::Table g{s.name + "_gate", {"deltaE_over_J", "F_G", "F_G_isolated"}, {}};
    std::vector<double> des = s.post_cut_delta_e;
    std::sort(des.begin(), des.end());
    for (double de : des) {
      auto opt = s.cut;
      opt.delta_e = de;
      const auto pg = protocols::run_post_cut_gate(s.spec, opt, op.j0, op.t_star, s.engine);
      g.rows.push_back({de, pg.f_g, pg.f_g_isolated});
      out.summary.push_back("deltaE=" + num(de) + " F_G(t*)=" + num(pg.f_g) + " isolated=" + num(pg.f_g_isolated));
    }
    out.tables.push_back(std::move(g));
  }
  return out;
}

ScenarioResult run_lambda_scenario(const Scenario& s) {
  const auto op = resolve_operating_point(s, s.spec.n_bus);
  const auto rows = protocols::sweep_lambda(s.spec, s.engine, op.j0, op.t_star, s.lambdas);
  ScenarioResult out;
  out.engine = "mbq";
  io::Table t{s.name, {"lambda", "F_G"}, {}};
  for (const auto& [l, f] : rows) t.rows.push_back({l, f});
  out.tables.push_back(std::move(t));
  out.summary.push_back("j0=" + num(op.j0) + " t*=" + num(op.t_star));
  return out;
}

io::Table optima_table(const std::string& name, const std::vector<Optimum>& optima) {
  io::Table t{name, {"n", "j0_opt", "t_opt", "peak", "boundary_hit"}, {}};
  for (const auto& o : optima) t.rows.push_back({double(o.n), o.j0_opt, o.t_opt, o.peak, o.boundary_hit ? 1.0 : 0.0});
  return t;
}

ScenarioResult run_optimize_scenario(const Scenario& s) {
  const auto o = optimize(s.spec.n_bus, s.spec.j);
  ScenarioResult out;
  out.engine = "ffq";
  out.tables.push_back(optima_table(s.name, {o}));
  out.summary.push_back("n=" + std::to_string(o.n) + " j0_opt=" + num(o.j0_opt) + " t_opt=" + num(o.t_opt) +
                        " peak=" + num(o.peak));
  if (o.boundary_hit) out.notes.push_back("optimum on the search box boundary after widening");
  return out;
}

ScenarioResult run_scaling_scenario(const Scenario& s) {
  std::vector<Optimum> optima(s.n_values.size());
  std::vector<int> ns = s.n_values;
  std::sort(ns.begin(), ns.end());
  parallel_for(ns.size(), [&](std::size_t i) { optima[i] = optimize(ns[i], s.spec.j); });
  const auto fit = fit_scaling(optima);
  ScenarioResult out;
  out.engine = "ffq";
  out.tables.push_back(optima_table(s.name, optima));
  out.tables.push_back({s.name + "_fit", {"prefactor", "exponent", "a", "b"}, {{fit.prefactor, fit.exponent, fit.a, fit.b}}});
  out.summary.push_back("j0_opt = " + num(fit.prefactor) + " J N^" + num(fit.exponent));
  out.summary.push_back("t_opt = (" + num(fit.a) + " N + " + num(fit.b) + " N^(1/3)) / J");
  return out;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::Gate: return run_gate_scenario(s);
    case ScenarioKind::Repeat: return run_repeat_scenario(s);
    case ScenarioKind::Gradual: return run_gradual_scenario(s);
    case ScenarioKind::Cut: return run_cut_scenario(s);
    case ScenarioKind::LambdaSweep: return run_lambda_scenario(s);
    case ScenarioKind::Optimize: return run_optimize_scenario(s);
    case ScenarioKind::Scaling: return run_scaling_scenario(s);
  }
  throw ConfigError("unhandled scenario kind");
}

io::Metadata scenario_metadata(const Scenario& s, const ScenarioResult& r) {
  io::Metadata m;
  m.scenario = s.source;
  m.engine = r.engine;
  m.version = io::code_version();
  m.tolerances = io::default_tolerances();
  m.tolerances["ffq_ramp_step_change"] = s.engine.ffq.tolerance;
  m.tolerances["mbq_krylov_error"] = s.engine.mbq.krylov.tolerance;
  m.tolerances["mbq_ramp_step_change"] = s.engine.mbq.ramp_tolerance;
  m.notes = r.notes;
  return m;
}

}  // namespace busgate
