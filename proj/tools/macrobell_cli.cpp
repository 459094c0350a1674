// Command-line driver: runs experiment configs, the full verification suite,
// tree construction rendering, and the settings-budget calculator.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "macrobell/anticommuting.hpp"
#include "macrobell/bell.hpp"
#include "macrobell/harness.hpp"
#include "macrobell/io.hpp"

namespace {

int run_config(const std::string& config_path, const std::string& out_path, int threads) {
  const macrobell::ScenarioConfig config = macrobell::load_scenario_config(config_path);
  const macrobell::Report report = macrobell::run_scenario(config, threads);
  std::cout << report.human_summary();
  const std::string target = !out_path.empty() ? out_path : config.output_path;
  if (!target.empty()) {
    std::ofstream out(target);
    if (!out) {
      std::cerr << "cannot write report to " << target << '\n';
      return 2;
    }
    out << report.json_with_timing() << '\n';
    std::cout << "report written to " << target << '\n';
  } else {
    std::cout << report.json_with_timing() << '\n';
  }
  return report.pass ? 0 : 1;
}

int run_tree(int k, bool folded, const std::string& json_path) {
  const macrobell::OperatorFamily family =
      folded ? macrobell::folded_tree(k) : macrobell::simple_tree(k);
  std::cout << (folded ? "folded" : "simple") << " tree, k = " << k << '\n';
  std::cout << macrobell::render_family_tree(family);
  std::cout << "verified anti-commuting: "
            << (macrobell::verify_anticommuting(family) ? "yes" : "no") << '\n';
  if (folded) {
    std::cout << "region-size bound sum g(2^(l-1)/(k-1)) = "
              << macrobell::folded_region_bound(k) << '\n';
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "cannot write " << json_path << '\n';
      return 2;
    }
    out << macrobell::family_to_json(family) << '\n';
    std::cout << "family written to " << json_path << '\n';
  }
  return 0;
}

int write_configs(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& named : macrobell::builtin_criterion_configs()) {
    const std::string path = dir + "/" + named.name + ".json";
    std::ofstream out(path);
    if (!out) {
      std::cerr << "cannot write " << path << '\n';
      return 2;
    }
    out << macrobell::scenario_config_to_json(named.config) << '\n';
    std::cout << "wrote " << path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"macrobell: local realism of macroscopic correlations, at desk scale"};
  app.require_subcommand(1);

  int threads = 0;  // 0 = MACROBELL_THREADS or hardware default

  auto* run = app.add_subcommand("run", "Run one experiment config (JSON)");
  std::string config_path;
  std::string out_path;
  run->add_option("config", config_path, "Path to the config JSON")->required();
  run->add_option("--out", out_path, "Write the report JSON here");
  run->add_option("--threads", threads, "Worker thread count");

  auto* verify = app.add_subcommand("verify-all", "Run the full verification suite");
  std::string out_dir = "reports";
  verify->add_option("--out-dir", out_dir, "Directory for the per-criterion reports");
  verify->add_option("--threads", threads, "Worker thread count");

  auto* tree = app.add_subcommand("tree", "Construct and render an operator family");
  int k = 4;
  bool folded = false;
  std::string tree_json;
  tree->add_option("--k", k, "Region count")->required();
  tree->add_flag("--folded", folded, "Use the folded construction");
  tree->add_option("--json", tree_json, "Write the family JSON here");

  auto* budget = app.add_subcommand("budget", "Settings budget floor(N_X / M)");
  std::uint64_t region_size = 0;
  std::uint64_t body_count = 1;
  budget->add_option("--n", region_size, "Qubits per region")->required();
  budget->add_option("--m", body_count, "Observable body count")->required();

  auto* configs = app.add_subcommand("write-configs", "Regenerate the canonical config files");
  std::string config_dir = "configs";
  configs->add_option("--dir", config_dir, "Target directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) return run_config(config_path, out_path, threads);
    if (app.got_subcommand(verify)) return macrobell::verify_all(out_dir, threads, std::cout);
    if (app.got_subcommand(tree)) return run_tree(k, folded, tree_json);
    if (app.got_subcommand(budget)) {
      std::cout << macrobell::settings_budget(region_size, body_count) << '\n';
      return 0;
    }
    if (app.got_subcommand(configs)) return write_configs(config_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
