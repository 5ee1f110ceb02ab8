#include "busgate/reproduce.hpp"

#include <algorithm>
#include <cmath>

#include "busgate/optimize.hpp"
#include "busgate/parallel.hpp"
#include "busgate/protocols.hpp"

namespace busgate {

using nlohmann::json;

const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> t{"fig1a", "fig1b", "fig3a", "fig3b", "fig3c", "fig3d", "table1"};
  return t;
}

int capped_bus_length(int sites_at_16, int sites_at_10, int site_cap, std::vector<std::string>& warnings) {
  if (sites_at_16 <= site_cap) return 16;
  if (sites_at_10 > site_cap)
    throw ConfigError("even the N=10 register (" + std::to_string(sites_at_10) + " sites) exceeds the cap of " +
                      std::to_string(site_cap));
  warnings.push_back("N=16 needs " + std::to_string(sites_at_16) + " sites, above the cap of " +
                     std::to_string(site_cap) + "; using N=10");
  return 10;
}

namespace {

std::string num(double x) { return io::format_number(x); }

Reproduction start(const std::string& target, const std::vector<std::string>& columns, json params) {
  Reproduction r;
  r.table.name = target;
  r.table.columns = columns;
  params["target"] = target;
  r.metadata.scenario = std::move(params);
  r.metadata.version = io::code_version();
  r.metadata.tolerances = io::default_tolerances();
  return r;
}

ChainSpec bus(int n) {
  ChainSpec s;
  s.n_bus = n;
  return s;
}

std::string resolved(const EngineOptions& opt, int n, double j0) {
  ChainSpec s = bus(n);
  s.j0 = j0;
  return to_string(resolve_engine(opt.engine, validate_spec(s), opt.site_cap));
}

Reproduction fig1a(const EngineOptions& opt) {
  const int n = 100;
  const double j0 = 0.5;
  auto r = start("fig1a", {"t_in_1_over_J", "F_G"}, {{"n_bus", n}, {"j0", j0}, {"t_max", 40.0}, {"dt", 0.1}});
  std::vector<double> times;
  for (int i = 0; i <= 400; ++i) times.push_back(0.1 * i);
  const auto g = protocols::run_gate(bus(n), opt, j0, times, {}, transfer_time_estimate(n));
  r.metadata.engine = to_string(g.engine);
  std::size_t best = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    r.table.rows.push_back({times[i], g.f_g[i]});
    if (g.f_g[i] > g.f_g[best]) best = i;
  }
  r.summary.push_back("peak F_G=" + num(g.f_g[best]) + " at t=" + num(times[best]));
  return r;
}

Reproduction fig1b(const EngineOptions& opt) {
  std::vector<int> ns;
  for (int n = 10; n <= 100; n += 10) ns.push_back(n);
  auto r = start("fig1b", {"N", "J0", "t_star", "F_G"}, {{"n_values", ns}, {"operating_point", "optimized"}});
  std::vector<std::vector<double>> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    const auto o = optimize(ns[i]);
    const auto g = protocols::run_gate(bus(ns[i]), opt, o.j0_opt, {o.t_opt}, {}, o.t_opt);
    rows[i] = {double(ns[i]), o.j0_opt, o.t_opt, g.f_g.front()};
  });
  r.table.rows = rows;
  r.metadata.engine = resolved(opt, ns.back(), 0.5);
  double worst = 1.0;
  for (const auto& row : rows) worst = std::min(worst, row[3]);
  r.summary.push_back("min F_G(t*) over N=" + num(worst));
  return r;
}

Reproduction fig3a(const EngineOptions& opt) {
  if (opt.engine == EngineKind::Mbq) throw ConfigError("fig3a runs on ffq; the 24-site cut lattice is free-fermion only");
  protocols::CutOptions c;
  auto r = start("fig3a", {"t", "F_M_cut", "F_glue"},
                 {{"n_bus", 16}, {"outer", c.outer}, {"delta_e", c.delta_e}, {"ramp_time", c.ramp_time},
                  {"glue_time", c.glue_time}, {"sample_dt", c.sample_dt}});
  const auto cr = protocols::run_cut_glue(bus(16), c, opt.ffq);
  r.metadata.engine = "ffq";
  for (std::size_t i = 0; i < cr.times.size(); ++i) r.table.rows.push_back({cr.times[i], cr.f_cut[i], cr.f_glue[i]});
  r.summary.push_back("F_M_cut start=" + num(cr.f_cut_start) + " end of cut=" + num(cr.f_cut_end) +
                      " F_glue end=" + num(cr.f_glue_end));
  return r;
}

Reproduction fig3b(const EngineOptions& opt) {
  const int n = 16;
  const auto o = optimize(n);
  std::vector<double> taus;
  const int steps = static_cast<int>(std::floor(3.0 * o.t_opt / 0.1));
  for (int i = 0; i <= steps; ++i) taus.push_back(0.1 * i);
  auto r = start("fig3b", {"tau", "F_G"},
                 {{"n_bus", n}, {"j0", o.j0_opt}, {"t_star", o.t_opt}, {"tau_max", 0.1 * steps}, {"tau_step", 0.1}});
  const auto rows = protocols::sweep_gradual(bus(n), opt, o.j0_opt, o.t_opt, taus);
  r.metadata.engine = resolved(opt, n, o.j0_opt);
  for (const auto& [tau, f] : rows) r.table.rows.push_back({tau, f});
  r.summary.push_back("F_G(t*; tau=0)=" + num(rows.front().second) + " plateau up to 1/J0=" + num(1.0 / o.j0_opt));
  return r;
}

Reproduction fig3c(const EngineOptions& opt) {
  protocols::CutOptions c;
  std::vector<std::string> warnings;
  const int n = capped_bus_length(16 + 2 + 2 * c.outer, 10 + 2 + 2 * c.outer, opt.site_cap, warnings);
  const auto o = optimize(n);
  const std::vector<double> des{1, 2, 5, 10, 15, 20, 30};
  auto r = start("fig3c", {"deltaE_over_J", "F_G"},
                 {{"n_bus", n}, {"outer", c.outer}, {"ramp_time", c.ramp_time}, {"j0", o.j0_opt},
                  {"t_star", o.t_opt}, {"delta_e_values", des}});
  r.warnings = warnings;
  r.metadata.notes = warnings;
  r.metadata.engine = "mbq (cut ramp on ffq)";
  std::vector<protocols::PostCutGate> res(des.size());
  parallel_for(des.size(), [&](std::size_t i) {
    auto ci = c;
    ci.delta_e = des[i];
    res[i] = protocols::run_post_cut_gate(bus(n), ci, o.j0_opt, o.t_opt, opt);
  });
  for (const auto& g : res) r.table.rows.push_back({g.delta_e, g.f_g});
  r.summary.push_back("isolated bus F_G(t*)=" + num(res.front().f_g_isolated));
  return r;
}

Reproduction fig3d(const EngineOptions& opt) {
  std::vector<std::string> warnings;
  const int n = capped_bus_length(18, 12, opt.site_cap, warnings);
  const auto o = optimize(n);
  std::vector<double> lambdas{-1e-3, 1e-3};
  for (int i = -4; i <= 4; ++i) lambdas.push_back(0.05 * i);
  std::sort(lambdas.begin(), lambdas.end());
  auto r = start("fig3d", {"lambda", "F_G"}, {{"n_bus", n}, {"j0", o.j0_opt}, {"t_star", o.t_opt}, {"lambdas", lambdas}});
  r.warnings = warnings;
  r.metadata.notes = warnings;
  r.metadata.engine = "mbq";
  const auto rows = protocols::sweep_lambda(bus(n), opt, o.j0_opt, o.t_opt, lambdas);
  double at0 = 0.0, worst = 1.0;
  for (const auto& [l, f] : rows) {
    r.table.rows.push_back({l, f});
    if (l == 0.0) at0 = f;
    worst = std::min(worst, f);
  }
  r.summary.push_back("F_G(t*; lambda=0)=" + num(at0) + " min over sweep=" + num(worst));
  return r;
}

Reproduction table1(const EngineOptions& opt) {
  const int n = 8;
  const auto o = optimize(n);
  auto r = start("table1", {"k", "F_G", "F_M"},
                 {{"n_bus", n}, {"j0", o.j0_opt}, {"t_star", o.t_opt}, {"k_max", 8}, {"mode", "reprepare"}});
  r.metadata.engine = "mbq";
  const auto rows = protocols::run_repeated(bus(n), opt, o.j0_opt, o.t_opt, 8, protocols::RepeatMode::Reprepare);
  for (const auto& row : rows) r.table.rows.push_back({double(row.k), row.f_g, row.f_m});
  r.summary.push_back("k=1: F_G=" + num(rows.front().f_g) + " F_M=" + num(rows.front().f_m));
  return r;
}

}  // namespace

Reproduction reproduce(const std::string& target, const EngineOptions& options) {
  if (target == "fig1a") return fig1a(options);
  if (target == "fig1b") return fig1b(options);
  if (target == "fig3a") return fig3a(options);
  if (target == "fig3b") return fig3b(options);
  if (target == "fig3c") return fig3c(options);
  if (target == "fig3d") return fig3d(options);
  if (target == "table1") return table1(options);
  throw ConfigError("unknown reproduce target '" + target +
                    "' (expected fig1a, fig1b, fig3a, fig3b, fig3c, fig3d or table1)");
}

}  // namespace busgate
