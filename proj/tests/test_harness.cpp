#include "macrobell/harness.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

using namespace macrobell;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("config parsing: schema errors name the field") {
  CHECK_THROWS_WITH_AS(parse_scenario_config("{\"kind\": \"budget\"}"),
                       doctest::Contains("config.seed"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario_config("{\"seed\": 1}"),
                       doctest::Contains("config.kind"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario_config("{\"kind\": \"zb_sweep\", \"seed\": 1}"),
                       doctest::Contains("config.states"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_scenario_config("{\"kind\": \"frobnicate\", \"seed\": 1}"),
      doctest::Contains("unknown scenario kind"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_scenario_config(
          "{\"kind\": \"budget\", \"seed\": 1, \"region_size\": 10, \"body_count\": 2, "
          "\"surprise\": true}"),
      doctest::Contains("config.surprise"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario_config("not json at all"), std::invalid_argument);
}

TEST_CASE("config serialization round trip") {
  for (const NamedConfig& named : builtin_criterion_configs()) {
    const std::string text = scenario_config_to_json(named.config);
    const ScenarioConfig back = parse_scenario_config(text);
    CHECK(scenario_config_to_json(back) == text);
  }
}

TEST_CASE("shipped config files match the canonical built-ins") {
  for (const NamedConfig& named : builtin_criterion_configs()) {
    const std::string path = std::string(MACROBELL_CONFIG_DIR) + "/" + named.name + ".json";
    CHECK(read_file(path) == scenario_config_to_json(named.config) + "\n");
  }
}

TEST_CASE("budget scenario report") {
  ScenarioConfig config;
  config.kind = ScenarioKind::kBudget;
  config.seed = 1;
  config.region_size = 10000000000000000ULL;
  config.body_count = 10000000ULL;
  config.expected_budget = 1000000000ULL;
  const Report report = run_scenario(config);
  CHECK(report.pass);
  const json body = json::parse(report.json_body);
  CHECK(body.contains("config"));
  CHECK(body.contains("records"));
  CHECK(body.contains("summary"));
  CHECK(body["summary"]["budget"] == 1000000000ULL);
  CHECK(body["pass"] == true);
  // Timing lives only in the timing-extended document.
  CHECK_FALSE(body.contains("timing"));
  CHECK(json::parse(report.json_with_timing()).contains("timing"));
}

TEST_CASE("scenario runs are deterministic and thread-count independent") {
  ScenarioConfig config;
  config.kind = ScenarioKind::kZbSweep;
  config.seed = 505;
  config.states = 6;
  config.n_min = 4;
  config.n_max = 5;
  config.frames_per_partition = 3;
  config.tolerance = 1e-9;

  const Report one = run_scenario(config, 1);
  const Report two = run_scenario(config, 2);
  const Report again = run_scenario(config, 2);
  CHECK(one.pass);
  CHECK(one.json_body == two.json_body);
  CHECK(two.json_body == again.json_body);
}

TEST_CASE("small runs of every scenario kind pass") {
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kPqCheck;
    c.seed = 9;
    c.trials = 10;
    c.n_min = 4;
    c.n_max = 6;
    c.tolerance = 1e-9;
    CHECK(run_scenario(c).pass);
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kChsh;
    c.seed = 9;
    c.tolerance = 1e-9;
    c.chsh_tolerance = 1e-6;
    CHECK(run_scenario(c).pass);
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kSection4Pipeline;
    c.seed = 9;
    c.cases_4q = 3;
    c.cases_6q = 1;
    c.tolerance = 1e-10;
    CHECK(run_scenario(c).pass);
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kMembership;
    c.seed = 9;
    c.cases_4q = 2;
    c.cases_6q = 1;
    CHECK(run_scenario(c).pass);
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kTreeBuild;
    c.seed = 9;
    c.k_max = 5;
    c.generator_checks = 5;
    c.generator_k_max = 4;
    c.norm_states = 5;
    c.norm_k_max = 3;
    const Report r = run_scenario(c);
    CHECK(r.pass);
    CHECK(r.criteria.size() == 5);
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kWernerThresholds;
    c.seed = 9;
    c.region_a = 8;
    c.region_b = 8;
    c.visibility_tolerance = 0.01;
    CHECK(run_scenario(c).pass);
  }
}

TEST_CASE("zb_sweep csv export") {
  ScenarioConfig config;
  config.kind = ScenarioKind::kZbSweep;
  config.seed = 2;
  config.states = 2;
  config.n_min = 4;
  config.n_max = 4;
  config.frames_per_partition = 2;
  config.tolerance = 1e-9;
  config.csv_path = "test_zb_sweep.csv";
  const Report report = run_scenario(config);
  CHECK(report.pass);
  const std::string csv = read_file(config.csv_path);
  CHECK(csv.rfind("trial,qubits,state,partition,frames,max_l\n", 0) == 0);
  CHECK(csv.find("0,4,pure") != std::string::npos);
  std::remove(config.csv_path.c_str());
}

TEST_CASE("human summary lines carry pass markers") {
  ScenarioConfig config;
  config.kind = ScenarioKind::kBudget;
  config.seed = 1;
  config.region_size = 100;
  config.body_count = 10;
  const Report report = run_scenario(config);
  CHECK(report.human_summary().find("[PASS] budget/budget_formula") != std::string::npos);
}
