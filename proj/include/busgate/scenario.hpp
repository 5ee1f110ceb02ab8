#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "busgate/engines.hpp"
#include "busgate/model.hpp"
#include "busgate/output.hpp"
#include "busgate/protocols.hpp"

namespace busgate {

enum class ScenarioKind { Gate, Repeat, Gradual, Cut, LambdaSweep, Optimize, Scaling };

std::string to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(const std::string& s);

struct Scenario {
  ScenarioKind kind = ScenarioKind::Gate;
  std::string name;
  ChainSpec spec;
  EngineOptions engine;

  // Operating point. j0: a number, "estimate" (default) or "optimized"
  // (joint transfer optimum). t_star: a number, "optimized" (default, the
  // transfer peak at the chosen j0) or "formula".
  std::optional<double> j0;
  bool j0_optimized = false;
  std::optional<double> t_star;
  protocols::Checkpoint checkpoint = protocols::Checkpoint::Optimized;

  // gate
  double t_end = 0.0;  // 0 means 2 t*
  double dt = 0.1;
  std::vector<double> checkpoints;

  // repeat
  int k_max = 8;
  protocols::RepeatMode repeat_mode = protocols::RepeatMode::Reprepare;

  // gradual
  std::vector<double> taus;
  bool retime = false;

  // cut
  protocols::CutOptions cut;
  std::vector<double> post_cut_delta_e;  // gate after the cut for each value

  // lambda-sweep
  std::vector<double> lambdas;

  // scaling
  std::vector<int> n_values;

  std::optional<std::filesystem::path> out_dir;
  std::optional<io::Format> format;

  nlohmann::json source;  // document as given, echoed into metadata
};

/// Strict parse: unknown keys, keys that do not apply to the kind, missing
/// required fields and type mismatches all throw ConfigError.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

struct ScenarioResult {
  std::vector<io::Table> tables;
  std::vector<std::string> summary;
  std::vector<std::string> notes;
  std::string engine;
};

ScenarioResult run_scenario(const Scenario& s);

/// (j0, t*) for a bus length under the scenario's operating-point rules.
protocols::OperatingPoint resolve_operating_point(const Scenario& s, int n);

/// Metadata for a scenario result.
io::Metadata scenario_metadata(const Scenario& s, const ScenarioResult& r);

}  // namespace busgate
