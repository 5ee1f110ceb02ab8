#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "busgate/optimize.hpp"
#include "busgate/output.hpp"
#include "busgate/reproduce.hpp"
#include "busgate/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;

struct Flags {
  std::optional<std::string> engine;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> cap_sites;
};

void apply_engine_flags(const Flags& f, busgate::EngineOptions& e) {
  if (f.engine) e.engine = busgate::parse_engine(*f.engine);
  if (f.cap_sites) {
    if (*f.cap_sites < 1 || *f.cap_sites > 30) throw busgate::ConfigError("--cap-sites must be in [1, 30]");
    e.site_cap = *f.cap_sites;
  }
}

void print(const std::filesystem::path& p) { std::cout << "wrote " << p.string() << '\n'; }

int run(const std::string& path, const Flags& f) {
  auto s = busgate::load_scenario(path);
  apply_engine_flags(f, s.engine);
  if (f.engine && s.engine.engine == busgate::EngineKind::Ffq && s.spec.lambda != 0.0)
    throw busgate::ConfigError("ffq requires λ=0");
  const auto dir = f.out ? std::filesystem::path(*f.out) : s.out_dir.value_or(".");
  const auto fmt = f.format ? busgate::io::parse_format(*f.format) : s.format.value_or(busgate::io::Format::Csv);
  const auto r = busgate::run_scenario(s);
  const auto meta = busgate::scenario_metadata(s, r);
  for (const auto& t : r.tables) print(busgate::io::write_table(dir, t, meta, fmt));
  for (const auto& n : r.notes) std::cerr << "warning: " << n << '\n';
  for (const auto& line : r.summary) std::cout << line << '\n';
  return kOk;
}

int reproduce(const std::string& target, const Flags& f) {
  busgate::EngineOptions e;
  apply_engine_flags(f, e);
  const auto dir = std::filesystem::path(f.out.value_or("."));
  const auto fmt = busgate::io::parse_format(f.format.value_or("csv"));
  const auto r = busgate::reproduce(target, e);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  print(busgate::io::write_table(dir, r.table, r.metadata, fmt));
  for (const auto& line : r.summary) std::cout << line << '\n';
  return kOk;
}

int optimal(int n, const Flags& f) {
  if (f.engine && busgate::parse_engine(*f.engine) == busgate::EngineKind::Mbq)
    throw busgate::ConfigError("the optimizer runs on ffq");
  const auto o = busgate::optimize(n);
  using busgate::io::format_number;
  std::cout << "n=" << n << " j0_opt=" << format_number(o.j0_opt) << " t_opt=" << format_number(o.t_opt)
            << " peak=" << format_number(o.peak) << (o.boundary_hit ? " (boundary)" : "") << '\n';
  if (f.out) {
    busgate::io::Table t{"optimal_n" + std::to_string(n), {"n", "j0_opt", "t_opt", "peak", "boundary_hit"},
                         {{double(n), o.j0_opt, o.t_opt, o.peak, o.boundary_hit ? 1.0 : 0.0}}};
    busgate::io::Metadata m;
    m.scenario = {{"command", "optimal"}, {"n_bus", n}};
    m.engine = "ffq";
    m.version = busgate::io::code_version();
    m.tolerances = busgate::io::default_tolerances();
    print(busgate::io::write_table(*f.out, t, m, busgate::io::parse_format(f.format.value_or("csv"))));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangling gate through a spin-chain bus: simulation and figure data"};
  app.set_version_flag("--version", busgate::io::code_version());
  app.require_subcommand(1);

  Flags flags;
  std::string engine, out, format;
  int cap = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--engine", engine, "auto | ffq | mbq")->check(CLI::IsMember({"auto", "ffq", "mbq"}));
    sub->add_option("--out", out, "output directory");
    sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--cap-sites", cap, "largest register for the dense engine");
  };

  std::string scenario_path, target;
  int n = 0;
  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON")->required();
  add_common(run_cmd);
  auto* rep_cmd = app.add_subcommand("reproduce", "emit the data behind a figure or table");
  rep_cmd->add_option("target", target, "fig1a | fig1b | fig3a | fig3b | fig3c | fig3d | table1")
      ->required()
      ->check(CLI::IsMember(busgate::reproduce_targets()));
  add_common(rep_cmd);
  auto* opt_cmd = app.add_subcommand("optimal", "optimal coupling and transfer time for a bus length");
  opt_cmd->add_option("--n", n, "bus length")->required()->check(CLI::PositiveNumber);
  add_common(opt_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  auto* active = app.get_subcommands().front();
  if (active->count("--engine")) flags.engine = engine;
  if (active->count("--out")) flags.out = out;
  if (active->count("--format")) flags.format = format;
  if (active->count("--cap-sites")) flags.cap_sites = cap;

  try {
    if (active == run_cmd) return run(scenario_path, flags);
    if (active == rep_cmd) return reproduce(target, flags);
    return optimal(n, flags);
  } catch (const busgate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const busgate::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
