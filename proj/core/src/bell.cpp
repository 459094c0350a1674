#include "macrobell/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "macrobell/random.hpp"
#include "simplex.hpp"

namespace macrobell {

namespace {

long long checked_product(const std::vector<long long>& factors) {
  long long out = 1;
  for (long long f : factors) {
    if (f <= 0 || out > kStrategyCountCap / f + 1) return kStrategyCountCap + 1;
    out *= f;
  }
  return out;
}

std::vector<long long> per_region_strategy_counts(const BellScenario& s) {
  std::vector<long long> counts;
  for (int r = 0; r < s.region_count(); ++r) {
    long long c = 1;
    for (int i = 0; i < s.settings[r]; ++i) {
      if (c > kStrategyCountCap) break;
      c *= s.outcomes[r];
    }
    counts.push_back(c);
  }
  return counts;
}

// Decodes a region-major mixed-radix index into per-region digits.
std::vector<int> decode_mixed_radix(long long index, const std::vector<int>& radices) {
  std::vector<int> digits(radices.size());
  for (int r = static_cast<int>(radices.size()) - 1; r >= 0; --r) {
    digits[r] = static_cast<int>(index % radices[r]);
    index /= radices[r];
  }
  return digits;
}

long long encode_mixed_radix(const std::vector<int>& digits, const std::vector<int>& radices) {
  long long index = 0;
  for (std::size_t r = 0; r < radices.size(); ++r) {
    index = index * radices[r] + digits[r];
  }
  return index;
}

}  // namespace

long long BellScenario::joint_setting_count() const {
  std::vector<long long> f(settings.begin(), settings.end());
  return checked_product(f);
}

long long BellScenario::joint_outcome_count() const {
  std::vector<long long> f(outcomes.begin(), outcomes.end());
  return checked_product(f);
}

long long BellScenario::joint_strategy_count() const {
  return checked_product(per_region_strategy_counts(*this));
}

void BellScenario::validate() const {
  const int k = region_count();
  if (k < 1 || static_cast<int>(settings.size()) != k || static_cast<int>(outcomes.size()) != k ||
      static_cast<int>(povms.size()) != k) {
    throw std::invalid_argument("BellScenario: inconsistent region counts");
  }
  for (int r = 0; r < k; ++r) {
    if (local_dims[r] < 2 || settings[r] < 1 || outcomes[r] < 1) {
      throw std::invalid_argument("BellScenario: bad region shape");
    }
    if (static_cast<int>(povms[r].size()) != settings[r]) {
      throw std::invalid_argument("BellScenario: setting count mismatch in POVM table");
    }
    for (int i = 0; i < settings[r]; ++i) {
      if (static_cast<int>(povms[r][i].size()) != outcomes[r]) {
        throw std::invalid_argument("BellScenario: outcome count mismatch in POVM table");
      }
      Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(local_dims[r], local_dims[r]);
      for (const auto& e : povms[r][i]) {
        if (e.rows() != local_dims[r] || e.cols() != local_dims[r]) {
          throw std::invalid_argument("BellScenario: POVM element dimension mismatch");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -kPovmPsdTol) {
          throw std::invalid_argument("BellScenario: POVM element not positive semi-definite");
        }
        sum += e;
      }
      const Eigen::MatrixXcd identity =
          Eigen::MatrixXcd::Identity(local_dims[r], local_dims[r]);
      if ((sum - identity).cwiseAbs().maxCoeff() > kPovmCompletenessTol) {
        throw std::invalid_argument("BellScenario: POVM completeness violated");
      }
    }
  }
}

BellScenario projective_qubit_scenario(const std::vector<std::vector<Direction>>& directions) {
  BellScenario s;
  const Eigen::Matrix2cd identity = Eigen::Matrix2cd::Identity();
  for (const auto& region_dirs : directions) {
    if (region_dirs.empty()) {
      throw std::invalid_argument("projective_qubit_scenario: region without settings");
    }
    s.local_dims.push_back(2);
    s.settings.push_back(static_cast<int>(region_dirs.size()));
    s.outcomes.push_back(2);
    std::vector<std::vector<Eigen::MatrixXcd>> table;
    for (const Direction& d : region_dirs) {
      const Eigen::Matrix2cd obs = direction_observable(d);
      table.push_back({(identity + obs) / 2.0, (identity - obs) / 2.0});
    }
    s.povms.push_back(std::move(table));
  }
  return s;
}

double JointDistribution::at(const std::vector<int>& setting_tuple,
                             const std::vector<int>& outcome_tuple) const {
  const long long is = encode_mixed_radix(setting_tuple, settings);
  const long long io = encode_mixed_radix(outcome_tuple, outcomes);
  long long joint_outcomes = 1;
  for (int o : outcomes) joint_outcomes *= o;
  return p.at(is * joint_outcomes + io);
}

void JointDistribution::validate() const {
  long long joint_settings = 1;
  for (int s : settings) joint_settings *= s;
  long long joint_outcomes = 1;
  for (int o : outcomes) joint_outcomes *= o;
  if (static_cast<long long>(p.size()) != joint_settings * joint_outcomes) {
    throw std::invalid_argument("JointDistribution: size mismatch");
  }
  for (double v : p) {
    if (v < -1e-10) throw std::runtime_error("JointDistribution: negative probability");
  }
  for (long long is = 0; is < joint_settings; ++is) {
    double sum = 0.0;
    for (long long io = 0; io < joint_outcomes; ++io) sum += p[is * joint_outcomes + io];
    if (std::abs(sum - 1.0) > kDistributionTol) {
      throw std::runtime_error("JointDistribution: per-setting normalization violated");
    }
  }

  // No-signalling: region r's exclusion marginal must not depend on region
  // r's setting.
  const int k = static_cast<int>(settings.size());
  for (int r = 0; r < k; ++r) {
    for (long long is = 0; is < joint_settings; ++is) {
      const auto setting_tuple = decode_mixed_radix(is, settings);
      if (setting_tuple[r] != 0) continue;  // compare everything against setting 0
      for (int alt = 1; alt < settings[r]; ++alt) {
        auto alt_tuple = setting_tuple;
        alt_tuple[r] = alt;
        const long long is_alt = encode_mixed_radix(alt_tuple, settings);
        // Marginalize region r's outcome for both settings.
        for (long long io = 0; io < joint_outcomes; ++io) {
          const auto outcome_tuple = decode_mixed_radix(io, outcomes);
          if (outcome_tuple[r] != 0) continue;
          double base_sum = 0.0;
          double alt_sum = 0.0;
          auto probe = outcome_tuple;
          for (int j = 0; j < outcomes[r]; ++j) {
            probe[r] = j;
            const long long io_probe = encode_mixed_radix(probe, outcomes);
            base_sum += p[is * joint_outcomes + io_probe];
            alt_sum += p[is_alt * joint_outcomes + io_probe];
          }
          if (std::abs(base_sum - alt_sum) > kDistributionTol) {
            throw std::runtime_error("JointDistribution: no-signalling violated");
          }
        }
      }
    }
  }
}

int LhvModel::strategy_outcome(long long strategy_index, int region, int setting) const {
  const int k = static_cast<int>(settings.size());
  // Peel off per-region strategy indices (region-major).
  std::vector<long long> region_counts(k);
  for (int r = 0; r < k; ++r) {
    long long c = 1;
    for (int i = 0; i < settings[r]; ++i) c *= outcomes[r];
    region_counts[r] = c;
  }
  std::vector<long long> region_strategy(k);
  for (int r = k - 1; r >= 0; --r) {
    region_strategy[r] = strategy_index % region_counts[r];
    strategy_index /= region_counts[r];
  }
  // Within the region: setting-major digits base `outcomes[region]`.
  long long s = region_strategy[region];
  for (int i = settings[region] - 1; i > setting; --i) s /= outcomes[region];
  return static_cast<int>(s % outcomes[region]);
}

JointDistribution quantum_distribution(const DensityMatrix& rho_eff,
                                       const BellScenario& scenario) {
  scenario.validate();
  long long dim = 1;
  for (int d : scenario.local_dims) dim *= d;
  if (dim != rho_eff.dim()) {
    throw std::invalid_argument("quantum_distribution: state dimension mismatch");
  }
  const long long joint_settings = scenario.joint_setting_count();
  const long long joint_outcomes = scenario.joint_outcome_count();

  JointDistribution out;
  out.settings = scenario.settings;
  out.outcomes = scenario.outcomes;
  out.p.resize(joint_settings * joint_outcomes);
  for (long long is = 0; is < joint_settings; ++is) {
    const auto setting_tuple = decode_mixed_radix(is, scenario.settings);
    for (long long io = 0; io < joint_outcomes; ++io) {
      const auto outcome_tuple = decode_mixed_radix(io, scenario.outcomes);
      Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
      for (int r = 0; r < scenario.region_count(); ++r) {
        op = kron(op, scenario.povms[r][setting_tuple[r]][outcome_tuple[r]]);
      }
      out.p[is * joint_outcomes + io] =
          rho_eff.matrix().transpose().cwiseProduct(op).sum().real();
    }
  }
  return out;
}

namespace {

// One measured unit of the full register: a site (or filler qubit) with its
// chosen operator. Units must tile [0, qubit_count) contiguously.
struct Unit {
  int first_qubit;
  int width;
  const Eigen::MatrixXcd* op;
};

std::vector<std::vector<int>> sites_as_contiguous(const std::vector<SiteGroup>& regions) {
  std::vector<std::vector<int>> all_sites;
  for (const auto& group : regions) {
    for (const auto& site : group) {
      if (site.empty()) throw std::invalid_argument("strategy_distribution: empty site");
      for (std::size_t t = 1; t < site.size(); ++t) {
        if (site[t] != site[t - 1] + 1) {
          throw std::invalid_argument(
              "strategy_distribution: site qubits must be contiguous ascending");
        }
      }
      all_sites.push_back(site);
    }
  }
  return all_sites;
}

}  // namespace

LhvModel strategy_distribution_over_sites(const DensityMatrix& rho_prime,
                                          const std::vector<SiteGroup>& regions,
                                          const BellScenario& scenario) {
  scenario.validate();
  const int k = scenario.region_count();
  if (static_cast<int>(regions.size()) != k) {
    throw std::invalid_argument("strategy_distribution: region count mismatch");
  }
  const int n = rho_prime.qubit_count();

  std::vector<int> site_counts(k);
  for (int r = 0; r < k; ++r) {
    site_counts[r] = static_cast<int>(regions[r].size());
    if (scenario.settings[r] > site_counts[r]) {
      throw std::invalid_argument(
          "strategy_distribution: settings budget exceeded (S_X > N_X)");
    }
    const int width = static_cast<int>(regions[r].front().size());
    if ((1 << width) != scenario.local_dims[r]) {
      throw std::invalid_argument("strategy_distribution: site width vs local dimension");
    }
  }

  // Extended scenario: every site carries a setting; slots past S_X duplicate
  // the last setting. Original strategies arise by marginalizing the padding.
  std::vector<long long> ext_counts(k);
  long long ext_total = 1;
  for (int r = 0; r < k; ++r) {
    long long c = 1;
    for (int i = 0; i < site_counts[r]; ++i) c *= scenario.outcomes[r];
    ext_counts[r] = c;
    if (ext_total > kStrategyCountCap / c) {
      throw std::invalid_argument("strategy_distribution: strategy count above cap");
    }
    ext_total *= c;
  }

  // Tiling of the register: sites plus identity fillers for uncovered qubits.
  const auto all_sites = sites_as_contiguous(regions);
  std::vector<bool> covered(n, false);
  for (const auto& site : all_sites) {
    for (int q : site) {
      if (q < 0 || q >= n || covered[q]) {
        throw std::invalid_argument("strategy_distribution: sites overlap or leave range");
      }
      covered[q] = true;
    }
  }

  LhvModel model;
  model.settings = scenario.settings;
  model.outcomes = scenario.outcomes;
  long long model_total = 1;
  std::vector<long long> model_counts = per_region_strategy_counts(scenario);
  for (long long c : model_counts) model_total *= c;
  model.weights.assign(model_total, 0.0);

  const Eigen::MatrixXcd identity2 = Eigen::Matrix2cd::Identity();
  for (long long ext = 0; ext < ext_total; ++ext) {
    // Decode per-region extended strategies (site-major digits).
    std::vector<std::vector<int>> ext_strategy(k);
    long long rest = ext;
    for (int r = k - 1; r >= 0; --r) {
      long long s = rest % ext_counts[r];
      rest /= ext_counts[r];
      ext_strategy[r].resize(site_counts[r]);
      for (int i = site_counts[r] - 1; i >= 0; --i) {
        ext_strategy[r][i] = static_cast<int>(s % scenario.outcomes[r]);
        s /= scenario.outcomes[r];
      }
    }

    // Full-register operator in global qubit order.
    std::vector<Unit> units;
    int site_cursor = 0;
    for (int r = 0; r < k; ++r) {
      for (int i = 0; i < site_counts[r]; ++i, ++site_cursor) {
        const int setting = std::min(i, scenario.settings[r] - 1);
        const auto& op = scenario.povms[r][setting][ext_strategy[r][i]];
        units.push_back(Unit{all_sites[site_cursor].front(),
                             static_cast<int>(all_sites[site_cursor].size()), &op});
      }
    }
    for (int q = 0; q < n; ++q) {
      if (!covered[q]) units.push_back(Unit{q, 1, &identity2});
    }
    std::sort(units.begin(), units.end(),
              [](const Unit& a, const Unit& b) { return a.first_qubit < b.first_qubit; });

    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
    for (const Unit& u : units) op = kron(op, *u.op);

    const double weight = rho_prime.matrix().transpose().cwiseProduct(op).sum().real();

    // Marginalize padding: the original strategy keeps the first S_X entries.
    std::vector<int> digits;
    std::vector<int> radices;
    for (int r = 0; r < k; ++r) {
      for (int i = 0; i < scenario.settings[r]; ++i) {
        digits.push_back(ext_strategy[r][i]);
        radices.push_back(scenario.outcomes[r]);
      }
    }
    model.weights[encode_mixed_radix(digits, radices)] += weight;
  }
  return model;
}

LhvModel strategy_distribution(const DensityMatrix& rho_prime, const Partition& partition,
                               const BellScenario& scenario) {
  partition.validate(rho_prime.qubit_count());
  std::vector<SiteGroup> regions;
  for (const auto& region : partition.regions) {
    SiteGroup group;
    for (int q : region) group.push_back({q});
    regions.push_back(std::move(group));
  }
  return strategy_distribution_over_sites(rho_prime, regions, scenario);
}

JointDistribution reconstruct_distribution(const LhvModel& model, const BellScenario& scenario) {
  const long long joint_settings = scenario.joint_setting_count();
  const long long joint_outcomes = scenario.joint_outcome_count();
  const long long strategies = static_cast<long long>(model.weights.size());
  const int k = scenario.region_count();

  JointDistribution out;
  out.settings = scenario.settings;
  out.outcomes = scenario.outcomes;
  out.p.assign(joint_settings * joint_outcomes, 0.0);
  for (long long m = 0; m < strategies; ++m) {
    const double w = model.weights[m];
    if (w == 0.0) continue;
    for (long long is = 0; is < joint_settings; ++is) {
      const auto setting_tuple = decode_mixed_radix(is, scenario.settings);
      std::vector<int> outcome_tuple(k);
      for (int r = 0; r < k; ++r) {
        outcome_tuple[r] = model.strategy_outcome(m, r, setting_tuple[r]);
      }
      out.p[is * joint_outcomes + encode_mixed_radix(outcome_tuple, scenario.outcomes)] += w;
    }
  }
  return out;
}

std::vector<SiteGroup> group_into_blocks(const Partition& partition, int block_width) {
  if (block_width < 1) throw std::invalid_argument("group_into_blocks: bad block width");
  std::vector<SiteGroup> regions;
  for (const auto& region : partition.regions) {
    if (region.size() % block_width != 0) {
      throw std::invalid_argument("group_into_blocks: region size not divisible by block width");
    }
    SiteGroup group;
    for (std::size_t start = 0; start < region.size(); start += block_width) {
      std::vector<int> site(region.begin() + start, region.begin() + start + block_width);
      group.push_back(std::move(site));
    }
    regions.push_back(std::move(group));
  }
  return regions;
}

MembershipVerdict lhv_membership(const JointDistribution& p, const BellScenario& scenario) {
  const long long strategies = scenario.joint_strategy_count();
  if (strategies > kStrategyCountCap) {
    throw std::invalid_argument("lhv_membership: scenario too large (strategy count cap)");
  }
  const long long joint_settings = scenario.joint_setting_count();
  const long long joint_outcomes = scenario.joint_outcome_count();
  if (static_cast<long long>(p.p.size()) != joint_settings * joint_outcomes) {
    throw std::invalid_argument("lhv_membership: distribution shape mismatch");
  }
  const int k = scenario.region_count();

  LhvModel probe;
  probe.settings = scenario.settings;
  probe.outcomes = scenario.outcomes;

  // Equality system: strategy weights reproduce p, plus total mass one.
  const std::size_t rows = static_cast<std::size_t>(joint_settings * joint_outcomes) + 1;
  std::vector<std::vector<double>> a(rows, std::vector<double>(strategies, 0.0));
  std::vector<double> b(rows, 0.0);
  for (long long m = 0; m < strategies; ++m) {
    for (long long is = 0; is < joint_settings; ++is) {
      const auto setting_tuple = decode_mixed_radix(is, scenario.settings);
      std::vector<int> outcome_tuple(k);
      for (int r = 0; r < k; ++r) {
        outcome_tuple[r] = probe.strategy_outcome(m, r, setting_tuple[r]);
      }
      const long long io = encode_mixed_radix(outcome_tuple, scenario.outcomes);
      a[static_cast<std::size_t>(is * joint_outcomes + io)][m] = 1.0;
    }
    a[rows - 1][m] = 1.0;
  }
  for (long long i = 0; i < joint_settings * joint_outcomes; ++i) {
    b[static_cast<std::size_t>(i)] = p.p[static_cast<std::size_t>(i)];
  }
  b[rows - 1] = 1.0;

  const auto result = detail::phase1_feasibility(a, b, 1e-7);
  return MembershipVerdict{result.feasible, result.residual,
                           result.feasible ? result.solution : std::vector<double>{}};
}

Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho2) {
  if (rho2.qubit_count() != 2) {
    throw std::invalid_argument("correlation_matrix: two-qubit state required");
  }
  const Pauli axes[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  Eigen::Matrix3d t;
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      t(m, n) = expectation(rho2, PauliString({axes[m], axes[n]}));
    }
  }
  return t;
}

namespace {

double chsh_value_for_settings(const Eigen::Matrix3d& t, const Eigen::Vector3d& a1,
                               const Eigen::Vector3d& a2) {
  return (t.transpose() * (a1 + a2)).norm() + (t.transpose() * (a1 - a2)).norm();
}

Eigen::Vector3d safe_unit(const Eigen::Vector3d& v, const Eigen::Vector3d& fallback) {
  const double n = v.norm();
  return n > 1e-12 ? Eigen::Vector3d(v / n) : fallback;
}

}  // namespace

ChshResult chsh_optimize(const DensityMatrix& rho2, std::uint64_t seed) {
  const Eigen::Matrix3d t = correlation_matrix(rho2);

  const Eigen::Vector3d ez(0, 0, 1);
  const Eigen::Vector3d ex(1, 0, 0);

  // Spherical grid seeding.
  constexpr int kGrid = 20;
  std::vector<Eigen::Vector3d> grid;
  grid.reserve(kGrid * kGrid);
  for (int it = 0; it < kGrid; ++it) {
    const double theta = std::numbers::pi * (it + 0.5) / kGrid;
    for (int ip = 0; ip < kGrid; ++ip) {
      const double phi = 2.0 * std::numbers::pi * ip / kGrid;
      grid.emplace_back(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta));
    }
  }
  double best = -1.0;
  Eigen::Vector3d best_a1 = ez;
  Eigen::Vector3d best_a2 = ex;
  for (const auto& a1 : grid) {
    for (const auto& a2 : grid) {
      const double v = chsh_value_for_settings(t, a1, a2);
      if (v > best) {
        best = v;
        best_a1 = a1;
        best_a2 = a2;
      }
    }
  }

  // Alternating closed-form refinement from the best seed plus a few seeded
  // random restarts.
  Rng rng(seed);
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> starts = {{best_a1, best_a2}};
  for (int s = 0; s < 3; ++s) {
    starts.emplace_back(rng.direction().v, rng.direction().v);
  }
  Eigen::Vector3d a1 = best_a1;
  Eigen::Vector3d a2 = best_a2;
  Eigen::Vector3d b1 = safe_unit(t.transpose() * (a1 + a2), ez);
  Eigen::Vector3d b2 = safe_unit(t.transpose() * (a1 - a2), ex);
  for (const auto& [s1, s2] : starts) {
    Eigen::Vector3d ca1 = s1;
    Eigen::Vector3d ca2 = s2;
    Eigen::Vector3d cb1 = ez;
    Eigen::Vector3d cb2 = ex;
    for (int iter = 0; iter < 200; ++iter) {
      cb1 = safe_unit(t.transpose() * (ca1 + ca2), cb1);
      cb2 = safe_unit(t.transpose() * (ca1 - ca2), cb2);
      ca1 = safe_unit(t * (cb1 + cb2), ca1);
      ca2 = safe_unit(t * (cb1 - cb2), ca2);
    }
    const double v = chsh_value_for_settings(t, ca1, ca2);
    if (v > best) {
      best = v;
      a1 = ca1;
      a2 = ca2;
      b1 = safe_unit(t.transpose() * (ca1 + ca2), cb1);
      b2 = safe_unit(t.transpose() * (ca1 - ca2), cb2);
    }
  }

  return ChshResult{best, Direction(a1), Direction(a2), Direction(b1), Direction(b2)};
}

std::uint64_t settings_budget(std::uint64_t region_size, std::uint64_t body_count) {
  if (body_count < 1) throw std::invalid_argument("settings_budget: body count must be positive");
  if (body_count > region_size) {
    throw std::invalid_argument("settings_budget: body count exceeds region size");
  }
  return region_size / body_count;
}

}  // namespace macrobell
