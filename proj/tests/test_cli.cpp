#include <doctest.h>

#include <cmath>
#include <limits>

#include "busgate/reproduce.hpp"
#include "busgate/scenario.hpp"

using namespace busgate;
using nlohmann::json;

namespace {

std::string config_error(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scenario defaults") {
  const auto s = parse_scenario(json::parse(R"({"kind":"gate","n_bus":8})"));
  CHECK(s.kind == ScenarioKind::Gate);
  CHECK(s.spec.j == 1.0);
  CHECK(s.engine.engine == EngineKind::Auto);
  CHECK_FALSE(s.j0.has_value());
  CHECK_FALSE(s.j0_optimized);
  CHECK(s.checkpoint == protocols::Checkpoint::Optimized);
  const auto op = resolve_operating_point(s, 8);
  CHECK(op.j0 == doctest::Approx(optimal_coupling_estimate(8)).epsilon(1e-12));
  CHECK(op.t_star > 0.8 * transfer_time_estimate(8));
  CHECK(op.t_star < 1.3 * transfer_time_estimate(8));
}

TEST_CASE("scenario explicit values") {
  const auto s = parse_scenario(json::parse(
      R"({"kind":"repeat","n_bus":6,"j0":0.7,"t_star":3.0,"k_max":3,"mode":"continuous","engine":"mbq"})"));
  CHECK(*s.j0 == 0.7);
  CHECK(*s.t_star == 3.0);
  CHECK(s.k_max == 3);
  CHECK(s.repeat_mode == protocols::RepeatMode::Continuous);
  CHECK(s.engine.engine == EngineKind::Mbq);
  const auto f = parse_scenario(json::parse(R"({"kind":"gate","n_bus":8,"t_star":"formula","j0":"optimized"})"));
  CHECK(f.checkpoint == protocols::Checkpoint::Formula);
  CHECK(f.j0_optimized);
}

TEST_CASE("scenario errors") {
  CHECK(config_error(json::parse(R"({"kind":"gate","n_bus":8,"bogus":1})")).find("unknown key 'bogus'") !=
        std::string::npos);
  CHECK(config_error(json::parse(R"({"kind":"gate","n_bus":8,"k_max":2})")).find("unknown key 'k_max'") !=
        std::string::npos);
  CHECK_FALSE(config_error(json::parse(R"({"kind":"gate"})")).empty());
  CHECK_FALSE(config_error(json::parse(R"({"kind":"gate","n_bus":"8"})")).empty());
  CHECK_FALSE(config_error(json::parse(R"({"kind":"teleport","n_bus":8})")).empty());
  CHECK_FALSE(config_error(json::parse(R"({"kind":"gate","n_bus":8,"j0":"huge"})")).empty());
  CHECK_FALSE(config_error(json::parse(R"([1,2])")).empty());
  CHECK(config_error(json::parse(R"({"kind":"gate","n_bus":8,"lambda":0.2,"engine":"ffq"})"))
            .find("ffq requires λ=0") != std::string::npos);
}

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(123456789.123456) == "123456789.123");
  CHECK(io::format_number(1e-15) == "1e-15");
  CHECK(io::format_number(2.0) == "2");
}

TEST_CASE("rendering carries metadata and is deterministic") {
  io::Table t{"demo", {"x", "y"}, {{0.0, 1.0 / 3.0}, {0.5, 2.0}}};
  io::Metadata m;
  m.scenario = {{"kind", "gate"}};
  m.engine = "ffq";
  m.version = io::code_version();
  m.tolerances = io::default_tolerances();
  m.notes = {"hello"};
  const auto csv = io::render(t, m, io::Format::Csv);
  CHECK(csv == io::render(t, m, io::Format::Csv));
  CHECK(csv.find("# scenario:") == 0);
  CHECK(csv.find("# engine: ffq") != std::string::npos);
  CHECK(csv.find("# note: hello") != std::string::npos);
  CHECK(csv.find("x,y\n0,0.333333333333\n0.5,2\n") != std::string::npos);

  const auto js = json::parse(io::render(t, m, io::Format::Json));
  CHECK(js["metadata"]["engine"] == "ffq");
  CHECK(js["metadata"]["version"] == io::code_version());
  CHECK(js["columns"] == json({"x", "y"}));
  CHECK(js["rows"][0][1].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(io::parse_format("xml"), ConfigError);
}

TEST_CASE("reproduce target list and site cap") {
  CHECK(reproduce_targets().size() == 7);
  CHECK_THROWS_AS(reproduce("fig2"), ConfigError);
  std::vector<std::string> w;
  CHECK(capped_bus_length(26, 20, 26, w) == 16);
  CHECK(w.empty());
  CHECK(capped_bus_length(26, 20, 24, w) == 10);
  CHECK(w.size() == 1);
  CHECK_THROWS_AS(capped_bus_length(26, 20, 18, w), ConfigError);
}
