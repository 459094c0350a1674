#include "macrobell/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "macrobell/anticommuting.hpp"
#include "macrobell/bell.hpp"
#include "macrobell/correlations.hpp"
#include "macrobell/io.hpp"
#include "macrobell/monogamy.hpp"
#include "macrobell/random.hpp"
#include "macrobell/states.hpp"

namespace macrobell {

namespace {

using json = nlohmann::ordered_json;

// ---- config schema ----------------------------------------------------------

const json& require_field(const json& doc, const std::string& field) {
  if (!doc.contains(field)) {
    throw std::invalid_argument("config." + field + ": missing required field");
  }
  return doc.at(field);
}

int require_int(const json& doc, const std::string& field) {
  const json& v = require_field(doc, field);
  if (!v.is_number_integer()) {
    throw std::invalid_argument("config." + field + ": expected an integer");
  }
  return v.get<int>();
}

std::uint64_t require_u64(const json& doc, const std::string& field) {
  const json& v = require_field(doc, field);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw std::invalid_argument("config." + field + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double require_double(const json& doc, const std::string& field) {
  const json& v = require_field(doc, field);
  if (!v.is_number()) {
    throw std::invalid_argument("config." + field + ": expected a number");
  }
  return v.get<double>();
}

int optional_int(const json& doc, const std::string& field, int fallback) {
  return doc.contains(field) ? require_int(doc, field) : fallback;
}

std::string optional_string(const json& doc, const std::string& field) {
  if (!doc.contains(field)) return {};
  if (!doc.at(field).is_string()) {
    throw std::invalid_argument("config." + field + ": expected a string");
  }
  return doc.at(field).get<std::string>();
}

void reject_unknown_fields(const json& doc, const std::vector<std::string>& known) {
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("config." + key + ": unknown field");
    }
  }
}

// ---- parallel sweep ---------------------------------------------------------

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int i = t; i < count; i += threads) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// ---- shared generators ------------------------------------------------------

AnyState random_trial_state(Rng& rng, int qubits, bool pure, int mixed_rank_exponent) {
  const int dim = 1 << qubits;
  if (pure) return PureState(rng.haar_vector(dim));
  const int rank = std::min(dim, 1 << mixed_rank_exponent);
  return DensityMatrix(rng.ginibre_density(dim, rank));
}

// Unordered two-region splits covering all qubits with both sides >= 2;
// qubit 0 is pinned to the first region to kill the mirror duplicates.
std::vector<Partition> all_bipartitions_min2(int qubits) {
  std::vector<Partition> out;
  const int rest = qubits - 1;
  for (int mask = 0; mask < (1 << rest); ++mask) {
    std::vector<int> a{0};
    std::vector<int> b;
    for (int q = 0; q < rest; ++q) {
      if (mask & (1 << q)) {
        a.push_back(q + 1);
      } else {
        b.push_back(q + 1);
      }
    }
    if (a.size() >= 2 && b.size() >= 2) out.push_back(Partition{{a, b}});
  }
  return out;
}

Partition random_bipartition_min2(Rng& rng, int qubits) {
  const int a_size = 2 + static_cast<int>(rng.uniform_index(qubits - 3));
  std::vector<int> order(qubits);
  for (int q = 0; q < qubits; ++q) order[q] = q;
  for (int i = qubits - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<int>(rng.uniform_index(i + 1))]);
  }
  std::vector<int> a(order.begin(), order.begin() + a_size);
  std::vector<int> b(order.begin() + a_size, order.end());
  return Partition::two_regions(std::move(a), std::move(b));
}

double pq_bound_any(const AnyState& state, const Partition& partition,
                    const std::vector<MeasurementFrame>& frames) {
  return std::visit([&](const auto& s) { return pq_bound(s, partition, frames); }, state);
}

std::string partition_label(const Partition& p) {
  std::ostringstream out;
  for (int r = 0; r < p.region_count(); ++r) {
    if (r) out << '|';
    for (std::size_t i = 0; i < p.regions[r].size(); ++i) {
      if (i) out << ',';
      out << p.regions[r][i];
    }
  }
  return out.str();
}

// ---- report assembly --------------------------------------------------------

Report finish_report(const ScenarioConfig& config, json records, json summary,
                     std::vector<CriterionResult> criteria, double wall_ms,
                     std::string csv_text = {}) {
  Report report;
  report.kind = scenario_kind_name(config.kind);
  report.criteria = std::move(criteria);
  report.pass = std::all_of(report.criteria.begin(), report.criteria.end(),
                            [](const CriterionResult& c) { return c.pass; });
  report.wall_ms = wall_ms;

  json body;
  body["config"] = json::parse(scenario_config_to_json(config));
  body["records"] = std::move(records);
  body["summary"] = std::move(summary);
  json crit_json = json::array();
  for (const auto& c : report.criteria) {
    crit_json.push_back(json{{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
  }
  body["criteria"] = std::move(crit_json);
  body["pass"] = report.pass;
  report.json_body = body.dump(2);

  if (!config.csv_path.empty() && !csv_text.empty()) {
    std::ofstream csv(config.csv_path);
    if (!csv) throw std::runtime_error("cannot open csv path " + config.csv_path);
    csv << csv_text;
  }
  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw std::runtime_error("cannot open output path " + config.output_path);
    out << report.json_with_timing() << '\n';
  }
  return report;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// ---- zb_sweep ---------------------------------------------------------------

Report run_zb_sweep(const ScenarioConfig& config, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  struct TrialResult {
    int qubits = 0;
    bool pure = false;
    int partitions = 0;
    long long evaluations = 0;
    double max_l = 0.0;
    long long violations = 0;
    std::string csv;
  };
  std::vector<TrialResult> results(config.states);
  const bool want_csv = !config.csv_path.empty();
  const int span = config.n_max - config.n_min + 1;

  parallel_for(config.states, threads, [&](int t) {
    Rng rng(Rng::derive_seed(config.seed, t));
    TrialResult r;
    r.qubits = config.n_min + t % span;
    r.pure = (t % 2 == 0);
    const AnyState state = random_trial_state(rng, r.qubits, r.pure, 1 + (t / 2) % 4);
    std::ostringstream csv;
    for (const Partition& partition : all_bipartitions_min2(r.qubits)) {
      const DensityMatrix eff = effective_state(state, partition);
      double partition_max = 0.0;
      for (int f = 0; f < config.frames_per_partition; ++f) {
        const std::vector<MeasurementFrame> frames{rng.frame(), rng.frame()};
        const double l = zb_value(correlation_tensor(eff, frames));
        partition_max = std::max(partition_max, l);
        if (l > 1.0 + config.tolerance) ++r.violations;
        ++r.evaluations;
      }
      r.max_l = std::max(r.max_l, partition_max);
      ++r.partitions;
      if (want_csv) {
        csv << t << ',' << r.qubits << ',' << (r.pure ? "pure" : "mixed") << ','
            << partition_label(partition) << ',' << config.frames_per_partition << ','
            << partition_max << '\n';
      }
    }
    r.csv = csv.str();
    results[t] = std::move(r);
  });

  json records = json::array();
  double max_l = 0.0;
  long long violations = 0;
  long long evaluations = 0;
  std::string csv_text = want_csv ? "trial,qubits,state,partition,frames,max_l\n" : "";
  for (int t = 0; t < config.states; ++t) {
    const auto& r = results[t];
    records.push_back(json{{"trial", t},
                           {"qubits", r.qubits},
                           {"state", r.pure ? "pure" : "mixed"},
                           {"partitions", r.partitions},
                           {"max_l", r.max_l},
                           {"violations", r.violations}});
    max_l = std::max(max_l, r.max_l);
    violations += r.violations;
    evaluations += r.evaluations;
    csv_text += r.csv;
  }

  json summary{{"states", config.states},
               {"evaluations", evaluations},
               {"max_l", max_l},
               {"violations", violations}};
  std::vector<CriterionResult> criteria;
  criteria.push_back(
      {"zb_no_violation", violations == 0,
       "max L = " + format_double(max_l) + " over " + std::to_string(evaluations) +
           " tensor evaluations, violations = " + std::to_string(violations)});
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall,
                       std::move(csv_text));
}

// ---- pq_check ---------------------------------------------------------------

Report run_pq_check(const ScenarioConfig& config, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  struct TrialResult {
    int qubits = 0;
    double pq = 0.0;
    double zb = 0.0;
  };
  std::vector<TrialResult> results(config.trials);
  const int span = config.n_max - config.n_min + 1;

  parallel_for(config.trials, threads, [&](int t) {
    Rng rng(Rng::derive_seed(config.seed, t));
    TrialResult r;
    r.qubits = config.n_min + t % span;
    const AnyState state = random_trial_state(rng, r.qubits, t % 2 == 0, 2 + t % 3);
    const Partition partition = random_bipartition_min2(rng, r.qubits);
    const std::vector<MeasurementFrame> frames{rng.frame(), rng.frame()};
    r.pq = pq_bound_any(state, partition, frames);
    r.zb = zb_value(correlation_tensor(effective_state(state, partition), frames));
    results[t] = r;
  });

  json records = json::array();
  double max_delta = 0.0;
  double max_pq = 0.0;
  for (int t = 0; t < config.trials; ++t) {
    const auto& r = results[t];
    const double delta = std::abs(r.pq - r.zb);
    records.push_back(json{{"trial", t},
                           {"qubits", r.qubits},
                           {"pq", r.pq},
                           {"zb", r.zb},
                           {"delta", delta}});
    max_delta = std::max(max_delta, delta);
    max_pq = std::max(max_pq, r.pq);
  }

  json summary{{"trials", config.trials}, {"max_delta", max_delta}, {"max_pq", max_pq}};
  std::vector<CriterionResult> criteria;
  criteria.push_back({"pq_equals_zb", max_delta <= config.tolerance,
                      "max |pq - zb| = " + format_double(max_delta)});
  criteria.push_back({"pq_bound_holds", max_pq <= 1.0 + config.tolerance,
                      "max pq value = " + format_double(max_pq)});
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall);
}

// ---- chsh control -----------------------------------------------------------

Report run_chsh(const ScenarioConfig& config, int /*threads*/) {
  const auto t0 = std::chrono::steady_clock::now();
  const DensityMatrix singlet = to_density(named_state("singlet", 2));

  const MeasurementFrame frame(Direction(1, 0, 0), Direction(0, 1, 0));
  const double l = zb_value(correlation_tensor(singlet, {frame, frame}));

  const ChshResult opt = chsh_optimize(singlet, config.seed);
  const double tsirelson = 2.0 * std::sqrt(2.0);

  // Independent algebraic route: 2 sqrt(s1^2 + s2^2) over the correlation
  // matrix's top singular values.
  const Eigen::Matrix3d t = correlation_matrix(singlet);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(t);
  const double s1 = svd.singularValues()(0);
  const double s2 = svd.singularValues()(1);
  const double svd_bound = 2.0 * std::sqrt(s1 * s1 + s2 * s2);

  json records = json::array();
  records.push_back(json{{"check", "singlet_zb"}, {"l", l}});
  records.push_back(json{{"check", "chsh_optimize"},
                         {"value", opt.value},
                         {"svd_bound", svd_bound},
                         {"tsirelson", tsirelson}});

  std::vector<CriterionResult> criteria;
  criteria.push_back({"singlet_l_equals_2", std::abs(l - 2.0) <= config.tolerance,
                      "L = " + format_double(l)});
  const bool chsh_ok = std::abs(opt.value - tsirelson) <= config.chsh_tolerance &&
                       std::abs(opt.value - svd_bound) <= config.chsh_tolerance;
  criteria.push_back({"chsh_tsirelson", chsh_ok,
                      "optimizer = " + format_double(opt.value) +
                          ", singular-value bound = " + format_double(svd_bound)});

  json summary{{"l", l}, {"chsh", opt.value}, {"svd_bound", svd_bound}};
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall);
}

// ---- section 4 pipeline / membership ----------------------------------------

struct Section4Case {
  int qubits;
  Partition partition;
  BellScenario scenario;
  DensityMatrix rho;
};

Section4Case make_section4_case(std::uint64_t seed, int index, int qubits) {
  Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(index) + (qubits == 6 ? 10000 : 0)));
  const int half = qubits / 2;
  const Partition partition = Partition::contiguous({half, half});
  const int settings = half;  // S_X = N_X
  std::vector<std::vector<Direction>> directions(2);
  for (auto& region : directions) {
    for (int s = 0; s < settings; ++s) region.push_back(rng.direction());
  }
  DensityMatrix rho(rng.ginibre_density(1 << qubits, 1 << qubits));
  return Section4Case{qubits, partition, projective_qubit_scenario(directions), std::move(rho)};
}

Report run_section4(const ScenarioConfig& config, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const int total = config.cases_4q + config.cases_6q;
  struct CaseResult {
    int qubits = 0;
    double max_deviation = 0.0;
    double min_weight = 0.0;
    double weight_sum = 0.0;
  };
  std::vector<CaseResult> results(total);

  parallel_for(total, threads, [&](int i) {
    const bool big = i >= config.cases_4q;
    const Section4Case c = make_section4_case(config.seed, big ? i - config.cases_4q : i,
                                              big ? 6 : 4);
    const DensityMatrix rho_prime = permutation_symmetrize(c.rho, c.partition);
    const LhvModel model = strategy_distribution(rho_prime, c.partition, c.scenario);
    const JointDistribution reconstructed = reconstruct_distribution(model, c.scenario);
    const JointDistribution quantum =
        quantum_distribution(effective_state(c.rho, c.partition), c.scenario);
    quantum.validate();

    CaseResult r;
    r.qubits = c.qubits;
    r.min_weight = *std::min_element(model.weights.begin(), model.weights.end());
    for (double w : model.weights) r.weight_sum += w;
    for (std::size_t j = 0; j < quantum.p.size(); ++j) {
      r.max_deviation = std::max(r.max_deviation, std::abs(quantum.p[j] - reconstructed.p[j]));
    }
    results[i] = r;
  });

  json records = json::array();
  double max_dev = 0.0;
  double min_weight = 1.0;
  double worst_sum = 0.0;
  for (int i = 0; i < total; ++i) {
    const auto& r = results[i];
    records.push_back(json{{"case", i},
                           {"qubits", r.qubits},
                           {"max_deviation", r.max_deviation},
                           {"min_weight", r.min_weight},
                           {"weight_sum", r.weight_sum}});
    max_dev = std::max(max_dev, r.max_deviation);
    min_weight = std::min(min_weight, r.min_weight);
    worst_sum = std::max(worst_sum, std::abs(r.weight_sum - 1.0));
  }

  json summary{{"cases", total},
               {"max_deviation", max_dev},
               {"min_weight", min_weight},
               {"max_weight_sum_error", worst_sum}};
  std::vector<CriterionResult> criteria;
  criteria.push_back({"strategy_matches_quantum", max_dev <= config.tolerance,
                      "max |p_lhv - p_quantum| = " + format_double(max_dev)});
  criteria.push_back({"strategy_weights_valid", min_weight >= -1e-10 && worst_sum <= 1e-9,
                      "min weight = " + format_double(min_weight) +
                          ", worst sum error = " + format_double(worst_sum)});
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall);
}

Report run_membership(const ScenarioConfig& config, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const int total = config.cases_4q + config.cases_6q;
  struct CaseResult {
    int qubits = 0;
    bool feasible = false;
    double residual = 0.0;
  };
  std::vector<CaseResult> results(total);

  parallel_for(total, threads, [&](int i) {
    const bool big = i >= config.cases_4q;
    const Section4Case c = make_section4_case(config.seed, big ? i - config.cases_4q : i,
                                              big ? 6 : 4);
    const JointDistribution quantum =
        quantum_distribution(effective_state(c.rho, c.partition), c.scenario);
    const MembershipVerdict verdict = lhv_membership(quantum, c.scenario);
    results[i] = CaseResult{c.qubits, verdict.feasible, verdict.residual};
  });

  // Control: the singlet at CHSH-optimal projective settings must be outside
  // the strategy polytope.
  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  const ChshResult opt = chsh_optimize(singlet, config.seed);
  const BellScenario chsh_scenario =
      projective_qubit_scenario({{opt.a1, opt.a2}, {opt.b1, opt.b2}});
  const JointDistribution singlet_dist = quantum_distribution(singlet, chsh_scenario);
  const MembershipVerdict singlet_verdict = lhv_membership(singlet_dist, chsh_scenario);

  json records = json::array();
  int accepted = 0;
  double max_residual = 0.0;
  for (int i = 0; i < total; ++i) {
    const auto& r = results[i];
    records.push_back(json{{"case", i},
                           {"qubits", r.qubits},
                           {"feasible", r.feasible},
                           {"residual", r.residual}});
    if (r.feasible) ++accepted;
    max_residual = std::max(max_residual, r.residual);
  }
  records.push_back(json{{"case", "singlet_chsh"},
                         {"feasible", singlet_verdict.feasible},
                         {"residual", singlet_verdict.residual}});

  json summary{{"cases", total},
               {"accepted", accepted},
               {"max_residual", max_residual},
               {"singlet_rejected", !singlet_verdict.feasible}};
  std::vector<CriterionResult> criteria;
  criteria.push_back({"membership_accepts_constructed", accepted == total,
                      std::to_string(accepted) + "/" + std::to_string(total) +
                          " constructed distributions feasible, max residual = " +
                          format_double(max_residual)});
  criteria.push_back({"membership_rejects_singlet", !singlet_verdict.feasible,
                      "singlet CHSH residual = " + format_double(singlet_verdict.residual)});
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall);
}

// ---- tree_build -------------------------------------------------------------

Report run_tree_build(const ScenarioConfig& config, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  json records = json::array();
  bool counts_ok = true;
  bool sizes_ok = true;
  bool generators_ok = true;

  for (int k = 2; k <= config.k_max; ++k) {
    const OperatorFamily simple = simple_tree(k);
    const OperatorFamily folded = folded_tree(k);
    const bool simple_verified = verify_anticommuting(simple);
    const bool folded_verified = verify_anticommuting(folded);
    const std::uint64_t bound = folded_region_bound(k);
    const int max_folded_size =
        *std::max_element(folded.region_sizes.begin(), folded.region_sizes.end());

    const bool count_ok = simple.sequences.size() == (std::size_t{1} << k) &&
                          folded.sequences.size() == (std::size_t{1} << k) && simple_verified &&
                          folded_verified;
    const bool size_ok = static_cast<std::uint64_t>(max_folded_size) <= bound;
    counts_ok = counts_ok && count_ok;
    sizes_ok = sizes_ok && size_ok;

    int generator_failures = 0;
    if (config.generator_checks > 0 && k <= config.generator_k_max) {
      Rng rng(Rng::derive_seed(config.seed, 500 + k));
      for (int c = 0; c < config.generator_checks; ++c) {
        for (const OperatorFamily* base : {&simple, &folded}) {
          std::vector<int> shifts(k);
          std::vector<bool> flips(k);
          for (int r = 0; r < k; ++r) {
            shifts[r] = static_cast<int>(rng.uniform_index(base->region_sizes[r]));
            flips[r] = rng.uniform() < 0.5;
          }
          if (!verify_anticommuting(generate_vector_family(*base, shifts, flips))) {
            ++generator_failures;
          }
        }
      }
      generators_ok = generators_ok && generator_failures == 0;
    }

    records.push_back(json{{"k", k},
                           {"simple_count", simple.sequences.size()},
                           {"simple_sizes", simple.region_sizes},
                           {"simple_verified", simple_verified},
                           {"folded_count", folded.sequences.size()},
                           {"folded_sizes", folded.region_sizes},
                           {"folded_verified", folded_verified},
                           {"folded_bound", bound},
                           {"generator_failures", generator_failures}});
  }

  // Refined-reconstruction bound, formula probes.
  const bool min_size_ok =
      min_region_size(2) == 1 && min_region_size(4) == 2 && min_region_size(10) == 29;

  std::vector<CriterionResult> criteria;
  criteria.push_back({"tree_counts_and_verified", counts_ok,
                      "2^k sequences, pairwise anti-commuting, k = 2.." +
                          std::to_string(config.k_max)});
  criteria.push_back({"folded_sizes_within_bound", sizes_ok,
                      "every folded region size within sum g(2^(l-1)/(k-1))"});
  criteria.push_back({"min_region_size_formula", min_size_ok,
                      "ceil(2^(k-2)/(k-1)): k=2 -> 1, k=4 -> 2, k=10 -> 29"});
  if (config.generator_checks > 0) {
    criteria.push_back({"generators_preserve_anticommutation", generators_ok,
                        std::to_string(config.generator_checks) +
                            " random shift/flip applications per k <= " +
                            std::to_string(config.generator_k_max)});
  }

  // Norm suite: squared expectation sums on random pure states.
  json norm_records = json::array();
  if (config.norm_states > 0) {
    double global_max = 0.0;
    for (int k = 2; k <= config.norm_k_max; ++k) {
      std::vector<std::pair<std::string, OperatorFamily>> families;
      families.emplace_back("simple_tree(" + std::to_string(k) + ")", simple_tree(k));
      families.emplace_back("folded_tree(" + std::to_string(k) + ")", folded_tree(k));
      {
        Rng rng(Rng::derive_seed(config.seed, 900 + k));
        for (const auto& base : {families[0].second, families[1].second}) {
          std::vector<int> shifts(k);
          std::vector<bool> flips(k);
          for (int r = 0; r < k; ++r) {
            shifts[r] = static_cast<int>(rng.uniform_index(base.region_sizes[r]));
            flips[r] = rng.uniform() < 0.5;
          }
          families.emplace_back("generated(k=" + std::to_string(k) + ")",
                                generate_vector_family(base, shifts, flips));
        }
      }
      for (const auto& [name, family] : families) {
        const int span = family.total_qubits();
        std::vector<double> norms(config.norm_states);
        parallel_for(config.norm_states, threads, [&](int s) {
          Rng rng(Rng::derive_seed(config.seed, 7000ULL + 100ULL * k + s));
          const PureState psi(rng.haar_vector(1 << span));
          norms[s] = expectation_vector(psi, family).squared_norm();
        });
        const double max_norm = *std::max_element(norms.begin(), norms.end());
        global_max = std::max(global_max, max_norm);
        norm_records.push_back(json{{"family", name},
                                    {"span", span},
                                    {"states", config.norm_states},
                                    {"max_squared_norm", max_norm}});
      }
    }
    criteria.push_back({"anticommuting_norm_bound", global_max <= 1.0 + 1e-9,
                        "max sum of squared expectations = " + format_double(global_max)});
  }

  json summary{{"k_max", config.k_max}};
  if (config.norm_states > 0) summary["norm_records"] = norm_records;
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall);
}

// ---- werner_thresholds ------------------------------------------------------

Report run_werner(const ScenarioConfig& config, int /*threads*/) {
  const auto t0 = std::chrono::steady_clock::now();

  // Paper constants through the formula.
  const bool caps_exact = singlet_monogamy_cap(1, 2).cap == 2.0 / 3.0 &&
                          singlet_monogamy_cap(8, 8).cap == 5.0 / 12.0 &&
                          singlet_monogamy_cap(1, 1).cap == 1.0;

  // Oracle for the 1|2 split: the best mean singlet fidelity over pure
  // three-qubit states is the top eigenvalue of (P_01 + P_02)/2.
  const PureState singlet = std::get<PureState>(named_state("singlet", 2));
  const Eigen::MatrixXcd proj = singlet.amplitudes() * singlet.amplitudes().adjoint();
  Eigen::MatrixXcd mean_projector = Eigen::MatrixXcd::Zero(8, 8);
  for (int b = 0; b < 8; ++b) {
    for (int c = 0; c < 8; ++c) {
      const int b0 = (b >> 2) & 1, b1 = (b >> 1) & 1, b2 = b & 1;
      const int c0 = (c >> 2) & 1, c1 = (c >> 1) & 1, c2 = c & 1;
      Complex value = 0.0;
      if (b2 == c2) value += proj(b0 * 2 + b1, c0 * 2 + c1);  // pair (0,1)
      if (b1 == c1) value += proj(b0 * 2 + b2, c0 * 2 + c2);  // pair (0,2)
      mean_projector(b, c) = value / 2.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mean_projector);
  const double lambda_max = solver.eigenvalues().maxCoeff();
  const double v_max_oracle = (4.0 * lambda_max - 1.0) / 3.0;

  Eigen::Index argmax = 0;
  solver.eigenvalues().maxCoeff(&argmax);
  const PureState best(solver.eigenvectors().col(argmax).normalized());
  const Partition split{{{0}, {1, 2}}};
  const double v_max_library = max_effective_visibility(best.to_density_matrix(), split);

  const bool v_reaches = std::abs(v_max_library - 2.0 / 3.0) <= config.visibility_tolerance &&
                         std::abs(v_max_oracle - v_max_library) <= 1e-9;

  // Threshold classification, exact boundaries.
  const auto cls = [&](double v) { return werner_classify(v, config.region_a, config.region_b); };
  const bool classification_ok =
      cls(0.4).cls == WernerClass::kNoPovmViolation &&
      cls(5.0 / 12.0).cls == WernerClass::kNoPovmViolation &&
      cls(5.0 / 12.0 + 1e-9).cls == WernerClass::kNoProjectiveViolation &&
      cls(0.5).cls == WernerClass::kNoProjectiveViolation &&
      cls(2.0 / 3.0).cls == WernerClass::kNoProjectiveViolation &&
      cls(2.0 / 3.0 + 1e-9).cls == WernerClass::kUnconstrained &&
      cls(0.9).cls == WernerClass::kUnconstrained &&
      werner_classify(0.9, 1, 1).exceeds_monogamy_cap == false &&
      werner_classify(0.9, 8, 8).exceeds_monogamy_cap == true;

  json records = json::array();
  records.push_back(json{{"check", "caps"},
                         {"cap_1_2", singlet_monogamy_cap(1, 2).cap},
                         {"cap_8_8", singlet_monogamy_cap(8, 8).cap},
                         {"cap_1_1", singlet_monogamy_cap(1, 1).cap}});
  records.push_back(json{{"check", "max_visibility"},
                         {"lambda_max", lambda_max},
                         {"v_oracle", v_max_oracle},
                         {"v_library", v_max_library}});
  const char* class_names[] = {"no_povm_violation", "no_projective_violation", "unconstrained"};
  json table = json::array();
  for (double v : {-0.2, 0.0, 0.4, 5.0 / 12.0, 0.5, 2.0 / 3.0, 0.8, 1.0}) {
    const auto c = cls(v);
    table.push_back(json{{"visibility", v},
                         {"class", class_names[static_cast<int>(c.cls)]},
                         {"exceeds_cap", c.exceeds_monogamy_cap}});
  }
  records.push_back(json{{"check", "classification_table"}, {"table", table}});

  json summary{{"cap_1_2", singlet_monogamy_cap(1, 2).cap},
               {"cap_8_8", singlet_monogamy_cap(8, 8).cap},
               {"v_max", v_max_library}};
  std::vector<CriterionResult> criteria;
  criteria.push_back({"caps_exact", caps_exact, "(R+2)/(3R): R=2 -> 2/3, R=8 -> 5/12, R=1 -> 1"});
  criteria.push_back({"max_visibility_two_thirds", v_reaches,
                      "optimized 1|2 visibility = " + format_double(v_max_library)});
  criteria.push_back({"classification_thresholds", classification_ok,
                      "5/12 and 2/3 boundaries applied exactly"});
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall);
}

// ---- budget -----------------------------------------------------------------

Report run_budget(const ScenarioConfig& config, int /*threads*/) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t value = settings_budget(config.region_size, config.body_count);
  const bool formula_ok = settings_budget(100, 10) == 10 && settings_budget(100, 1) == 100;
  const bool expected_ok = config.expected_budget == 0 || value == config.expected_budget;

  json records = json::array();
  records.push_back(json{{"region_size", config.region_size},
                         {"body_count", config.body_count},
                         {"budget", value}});
  json summary{{"budget", value}};
  std::vector<CriterionResult> criteria;
  criteria.push_back({"budget_formula", formula_ok && expected_ok,
                      "floor(N_X / M) = " + std::to_string(value)});
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(config, std::move(records), std::move(summary), std::move(criteria), wall);
}

}  // namespace

// ---- public surface ---------------------------------------------------------

std::string scenario_kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kZbSweep: return "zb_sweep";
    case ScenarioKind::kPqCheck: return "pq_check";
    case ScenarioKind::kTreeBuild: return "tree_build";
    case ScenarioKind::kSection4Pipeline: return "section4_pipeline";
    case ScenarioKind::kWernerThresholds: return "werner_thresholds";
    case ScenarioKind::kChsh: return "chsh";
    case ScenarioKind::kMembership: return "membership";
    case ScenarioKind::kBudget: return "budget";
  }
  throw std::logic_error("unreachable scenario kind");
}

ScenarioKind scenario_kind_from_name(const std::string& name) {
  for (ScenarioKind kind :
       {ScenarioKind::kZbSweep, ScenarioKind::kPqCheck, ScenarioKind::kTreeBuild,
        ScenarioKind::kSection4Pipeline, ScenarioKind::kWernerThresholds, ScenarioKind::kChsh,
        ScenarioKind::kMembership, ScenarioKind::kBudget}) {
    if (scenario_kind_name(kind) == name) return kind;
  }
  throw std::invalid_argument("config.kind: unknown scenario kind '" + name + "'");
}

ScenarioConfig parse_scenario_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");

  ScenarioConfig config;
  const json& kind_field = require_field(doc, "kind");
  if (!kind_field.is_string()) throw std::invalid_argument("config.kind: expected a string");
  config.kind = scenario_kind_from_name(kind_field.get<std::string>());
  config.seed = require_u64(doc, "seed");
  config.output_path = optional_string(doc, "output_path");

  std::vector<std::string> known{"kind", "seed", "output_path"};
  switch (config.kind) {
    case ScenarioKind::kZbSweep:
      config.states = require_int(doc, "states");
      config.n_min = require_int(doc, "n_min");
      config.n_max = require_int(doc, "n_max");
      config.frames_per_partition = require_int(doc, "frames_per_partition");
      config.tolerance = require_double(doc, "tolerance");
      config.csv_path = optional_string(doc, "csv_path");
      known.insert(known.end(),
                   {"states", "n_min", "n_max", "frames_per_partition", "tolerance", "csv_path"});
      if (config.states < 1 || config.n_min < 4 || config.n_max > kMaxDenseQubits ||
          config.n_min > config.n_max) {
        throw std::invalid_argument("config.states/n_min/n_max: invalid sweep shape");
      }
      break;
    case ScenarioKind::kPqCheck:
      config.trials = require_int(doc, "trials");
      config.n_min = require_int(doc, "n_min");
      config.n_max = require_int(doc, "n_max");
      config.tolerance = require_double(doc, "tolerance");
      known.insert(known.end(), {"trials", "n_min", "n_max", "tolerance"});
      if (config.trials < 1 || config.n_min < 4 || config.n_min > config.n_max) {
        throw std::invalid_argument("config.trials/n_min/n_max: invalid sweep shape");
      }
      break;
    case ScenarioKind::kTreeBuild:
      config.k_max = require_int(doc, "k_max");
      config.generator_checks = optional_int(doc, "generator_checks", 0);
      config.generator_k_max = optional_int(doc, "generator_k_max", 5);
      config.norm_states = optional_int(doc, "norm_states", 0);
      config.norm_k_max = optional_int(doc, "norm_k_max", 4);
      known.insert(known.end(),
                   {"k_max", "generator_checks", "generator_k_max", "norm_states", "norm_k_max"});
      if (config.k_max < 2 || config.k_max > kMaxExhaustiveVerifyRegions) {
        throw std::invalid_argument("config.k_max: need 2..8");
      }
      break;
    case ScenarioKind::kSection4Pipeline:
      config.cases_4q = require_int(doc, "cases_4q");
      config.cases_6q = require_int(doc, "cases_6q");
      config.tolerance = require_double(doc, "tolerance");
      known.insert(known.end(), {"cases_4q", "cases_6q", "tolerance"});
      break;
    case ScenarioKind::kMembership:
      config.cases_4q = require_int(doc, "cases_4q");
      config.cases_6q = require_int(doc, "cases_6q");
      known.insert(known.end(), {"cases_4q", "cases_6q"});
      break;
    case ScenarioKind::kWernerThresholds:
      config.region_a = require_int(doc, "region_a");
      config.region_b = require_int(doc, "region_b");
      config.visibility_tolerance = require_double(doc, "visibility_tolerance");
      known.insert(known.end(), {"region_a", "region_b", "visibility_tolerance"});
      break;
    case ScenarioKind::kChsh:
      config.tolerance = require_double(doc, "tolerance");
      config.chsh_tolerance = require_double(doc, "chsh_tolerance");
      known.insert(known.end(), {"tolerance", "chsh_tolerance"});
      break;
    case ScenarioKind::kBudget:
      config.region_size = require_u64(doc, "region_size");
      config.body_count = require_u64(doc, "body_count");
      config.expected_budget = doc.contains("expected_budget")
                                   ? require_u64(doc, "expected_budget")
                                   : 0;
      known.insert(known.end(), {"region_size", "body_count", "expected_budget"});
      break;
  }
  reject_unknown_fields(doc, known);
  return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_config(buffer.str());
}

std::string scenario_config_to_json(const ScenarioConfig& config) {
  json doc;
  doc["kind"] = scenario_kind_name(config.kind);
  doc["seed"] = config.seed;
  switch (config.kind) {
    case ScenarioKind::kZbSweep:
      doc["states"] = config.states;
      doc["n_min"] = config.n_min;
      doc["n_max"] = config.n_max;
      doc["frames_per_partition"] = config.frames_per_partition;
      doc["tolerance"] = config.tolerance;
      if (!config.csv_path.empty()) doc["csv_path"] = config.csv_path;
      break;
    case ScenarioKind::kPqCheck:
      doc["trials"] = config.trials;
      doc["n_min"] = config.n_min;
      doc["n_max"] = config.n_max;
      doc["tolerance"] = config.tolerance;
      break;
    case ScenarioKind::kTreeBuild:
      doc["k_max"] = config.k_max;
      if (config.generator_checks > 0) {
        doc["generator_checks"] = config.generator_checks;
        doc["generator_k_max"] = config.generator_k_max;
      }
      if (config.norm_states > 0) {
        doc["norm_states"] = config.norm_states;
        doc["norm_k_max"] = config.norm_k_max;
      }
      break;
    case ScenarioKind::kSection4Pipeline:
      doc["cases_4q"] = config.cases_4q;
      doc["cases_6q"] = config.cases_6q;
      doc["tolerance"] = config.tolerance;
      break;
    case ScenarioKind::kMembership:
      doc["cases_4q"] = config.cases_4q;
      doc["cases_6q"] = config.cases_6q;
      break;
    case ScenarioKind::kWernerThresholds:
      doc["region_a"] = config.region_a;
      doc["region_b"] = config.region_b;
      doc["visibility_tolerance"] = config.visibility_tolerance;
      break;
    case ScenarioKind::kChsh:
      doc["tolerance"] = config.tolerance;
      doc["chsh_tolerance"] = config.chsh_tolerance;
      break;
    case ScenarioKind::kBudget:
      doc["region_size"] = config.region_size;
      doc["body_count"] = config.body_count;
      if (config.expected_budget != 0) doc["expected_budget"] = config.expected_budget;
      break;
  }
  if (!config.output_path.empty()) doc["output_path"] = config.output_path;
  return doc.dump(2);
}

std::string Report::json_with_timing() const {
  json doc = json::parse(json_body);
  doc["timing"] = json{{"wall_ms", wall_ms}};
  return doc.dump(2);
}

std::string Report::human_summary() const {
  std::ostringstream out;
  for (const auto& c : criteria) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << kind << '/' << c.id << ": " << c.detail << '\n';
  }
  return out.str();
}

Report run_scenario(const ScenarioConfig& config, int threads) {
  if (threads <= 0) threads = resolve_thread_count();
  switch (config.kind) {
    case ScenarioKind::kZbSweep: return run_zb_sweep(config, threads);
    case ScenarioKind::kPqCheck: return run_pq_check(config, threads);
    case ScenarioKind::kTreeBuild: return run_tree_build(config, threads);
    case ScenarioKind::kSection4Pipeline: return run_section4(config, threads);
    case ScenarioKind::kWernerThresholds: return run_werner(config, threads);
    case ScenarioKind::kChsh: return run_chsh(config, threads);
    case ScenarioKind::kMembership: return run_membership(config, threads);
    case ScenarioKind::kBudget: return run_budget(config, threads);
  }
  throw std::logic_error("unreachable scenario kind");
}

std::vector<NamedConfig> builtin_criterion_configs() {
  std::vector<NamedConfig> configs;

  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kZbSweep;
    c.seed = 11;
    c.states = 1000;
    c.n_min = 4;
    c.n_max = 10;
    c.frames_per_partition = 50;
    c.tolerance = 1e-9;
    configs.push_back({"criterion1_zb_sweep", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kPqCheck;
    c.seed = 22;
    c.trials = 300;
    c.n_min = 4;
    c.n_max = 8;
    c.tolerance = 1e-9;
    configs.push_back({"criterion2_pq_check", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kChsh;
    c.seed = 33;
    c.tolerance = 1e-9;
    c.chsh_tolerance = 1e-6;
    configs.push_back({"criterion3_chsh_control", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kSection4Pipeline;
    c.seed = 44;
    c.cases_4q = 50;
    c.cases_6q = 10;
    c.tolerance = 1e-10;
    configs.push_back({"criterion4_section4_pipeline", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kMembership;
    c.seed = 44;  // same cases as criterion 4
    c.cases_4q = 50;
    c.cases_6q = 10;
    configs.push_back({"criterion5_membership", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kTreeBuild;
    c.seed = 66;
    c.k_max = 8;
    c.generator_checks = 100;
    c.generator_k_max = 5;
    configs.push_back({"criterion6_trees", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kTreeBuild;
    c.seed = 77;
    c.k_max = 4;
    c.norm_states = 1000;
    c.norm_k_max = 4;
    configs.push_back({"criterion7_norm_bound", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kWernerThresholds;
    c.seed = 88;
    c.region_a = 8;
    c.region_b = 8;
    c.visibility_tolerance = 0.01;
    configs.push_back({"criterion8_werner", c});
  }
  {
    ScenarioConfig c;
    c.kind = ScenarioKind::kBudget;
    c.seed = 99;
    c.region_size = 10000000000000000ULL;  // 10^23 qubits over 10^7 partitions
    c.body_count = 10000000ULL;
    c.expected_budget = 1000000000ULL;
    configs.push_back({"criterion9_budget", c});
  }
  return configs;
}

int verify_all(const std::string& out_dir, int threads, std::ostream& log) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  bool all_pass = true;
  for (const NamedConfig& named : builtin_criterion_configs()) {
    const Report report = run_scenario(named.config, threads);
    all_pass = all_pass && report.pass;
    for (const auto& c : report.criteria) {
      log << (c.pass ? "[PASS] " : "[FAIL] ") << named.name << '/' << c.id << ": " << c.detail
          << '\n';
    }
    if (!out_dir.empty()) {
      const std::string path = out_dir + "/report_" + named.name + ".json";
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << report.json_with_timing() << '\n';
    }
  }
  log << (all_pass ? "verify-all: PASS" : "verify-all: FAIL") << '\n';
  return all_pass ? 0 : 1;
}

int resolve_thread_count() {
  if (const char* env = std::getenv("MACROBELL_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return std::min(parsed, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, std::min<int>(static_cast<int>(hw), 8));
}

}  // namespace macrobell
