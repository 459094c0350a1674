#pragma once

// Batch driver: scenario configs, seeded deterministic experiment execution,
// JSON/CSV report emission, and the named configs that reproduce every
// acceptance criterion.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace macrobell {

enum class ScenarioKind {
  kZbSweep,
  kPqCheck,
  kTreeBuild,
  kSection4Pipeline,
  kWernerThresholds,
  kChsh,
  kMembership,
  kBudget,
};

std::string scenario_kind_name(ScenarioKind kind);
ScenarioKind scenario_kind_from_name(const std::string& name);

/// One experiment description. The seed is always explicit; kind-specific
/// completeness is checked by the JSON parser and by run_scenario.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kBudget;
  std::uint64_t seed = 0;

  // zb_sweep
  int states = 0;
  int n_min = 0;
  int n_max = 0;
  int frames_per_partition = 0;
  double tolerance = 0.0;
  std::string csv_path;

  // pq_check
  int trials = 0;

  // tree_build
  int k_max = 0;
  int generator_checks = 0;
  int generator_k_max = 0;
  int norm_states = 0;
  int norm_k_max = 0;

  // section4_pipeline / membership
  int cases_4q = 0;
  int cases_6q = 0;

  // werner_thresholds
  int region_a = 0;
  int region_b = 0;
  double visibility_tolerance = 0.0;

  // chsh
  double chsh_tolerance = 0.0;

  // budget
  std::uint64_t region_size = 0;
  std::uint64_t body_count = 0;
  std::uint64_t expected_budget = 0;

  std::string output_path;
};

/// Parses a config document; unknown kinds, missing required fields, or bad
/// types throw std::invalid_argument naming the offending field path.
ScenarioConfig parse_scenario_config(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::string& path);
std::string scenario_config_to_json(const ScenarioConfig& config);

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string kind;
  bool pass = false;
  std::vector<CriterionResult> criteria;
  /// Deterministic document: config echo, per-trial records, summary,
  /// criteria. Timing lives outside so reruns are byte-identical.
  std::string json_body;
  double wall_ms = 0.0;

  std::string json_with_timing() const;
  std::string human_summary() const;
};

/// Runs one experiment. Deterministic for a fixed config (records are
/// indexed, never ordered by completion).
Report run_scenario(const ScenarioConfig& config, int threads = 0);

struct NamedConfig {
  std::string name;
  ScenarioConfig config;
};

/// The nine shipped configs, one per randomized/deterministic acceptance
/// criterion, in criterion order.
std::vector<NamedConfig> builtin_criterion_configs();

/// Runs every built-in config, writes report_<name>.json under out_dir (when
/// non-empty), prints one pass/fail line per criterion to `log`, and returns
/// 0 iff everything passed.
int verify_all(const std::string& out_dir, int threads, std::ostream& log);

/// MACROBELL_THREADS override, else hardware concurrency.
int resolve_thread_count();

}  // namespace macrobell
