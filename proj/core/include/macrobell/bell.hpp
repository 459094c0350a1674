#pragma once

// Generic Bell scenarios with POVM settings, the deterministic-strategy LHV
// construction from the symmetrized state, LHV membership by linear
// feasibility, a CHSH optimizer, and the many-body settings budget.

#include <cstdint>
#include <vector>

#include "macrobell/pauli.hpp"
#include "macrobell/states.hpp"

namespace macrobell {

inline constexpr double kPovmCompletenessTol = 1e-10;
inline constexpr double kPovmPsdTol = 1e-10;
inline constexpr double kDistributionTol = 1e-9;
inline constexpr long long kStrategyCountCap = 1'000'000;

/// K regions; per region a local dimension, a setting count S_X, an outcome
/// count, and the POVM elements E[setting][outcome] (PSD, completeness per
/// setting).
struct BellScenario {
  std::vector<int> local_dims;
  std::vector<int> settings;
  std::vector<int> outcomes;
  std::vector<std::vector<std::vector<Eigen::MatrixXcd>>> povms;

  int region_count() const { return static_cast<int>(local_dims.size()); }
  long long joint_setting_count() const;
  long long joint_outcome_count() const;
  /// Deterministic strategies per region multiply to the joint count.
  long long joint_strategy_count() const;

  void validate() const;
};

/// Two-outcome projective qubit settings (I +- a.sigma)/2 along the given
/// directions, one list per region.
BellScenario projective_qubit_scenario(const std::vector<std::vector<Direction>>& directions);

/// p[joint setting][joint outcome], region-major mixed-radix indices.
struct JointDistribution {
  std::vector<int> settings;
  std::vector<int> outcomes;
  std::vector<double> p;

  double at(const std::vector<int>& setting_tuple, const std::vector<int>& outcome_tuple) const;
  /// Nonnegativity, per-setting normalization, and no-signalling marginals,
  /// all within kDistributionTol. Throws on violation.
  void validate() const;
};

/// Mixture over joint deterministic strategy tuples. A region's strategy is
/// a vector of length S_X assigning an outcome to every setting; indices are
/// mixed-radix, setting-major within a region, region-major across regions.
struct LhvModel {
  std::vector<int> settings;
  std::vector<int> outcomes;
  std::vector<double> weights;

  /// Outcome assigned by joint strategy `strategy_index` in region `region`
  /// for setting `setting`.
  int strategy_outcome(long long strategy_index, int region, int setting) const;
};

/// p(i, j) = Tr(rho_eff (x)_X E^X_{i_X, j_X}).
JointDistribution quantum_distribution(const DensityMatrix& rho_eff,
                                       const BellScenario& scenario);

/// The constructive LHV weights: shared randomness selects the strategy
/// tuple (m_A, m_B, ...) with probability Tr(rho' (x)_X E^X_{m_X}), where
/// E^X_{m_X} places the POVM element of setting i on the region's i-th site.
/// Requires S_X <= N_X per region; smaller S_X is handled by duplicating the
/// last setting up to the site count and marginalizing the extra slots out.
LhvModel strategy_distribution(const DensityMatrix& rho_prime, const Partition& partition,
                               const BellScenario& scenario);

/// Site-level version for M-body observables: each site is an M-qubit block
/// measured by a 2^M-dimensional POVM.
LhvModel strategy_distribution_over_sites(const DensityMatrix& rho_prime,
                                          const std::vector<SiteGroup>& regions,
                                          const BellScenario& scenario);

/// p(i, j) = sum_m w(m) prod_X [m_X^{i_X} = j_X]. Equals the quantum
/// distribution of the effective state when the model came from
/// strategy_distribution of the symmetrized state.
JointDistribution reconstruct_distribution(const LhvModel& model, const BellScenario& scenario);

/// Splits each region of a qubit partition into consecutive blocks of
/// `block_width` qubits (each block's qubits must be contiguous).
std::vector<SiteGroup> group_into_blocks(const Partition& partition, int block_width);

struct MembershipVerdict {
  bool feasible;
  /// Phase-1 objective at termination; ~0 iff the distribution lies in the
  /// strategy polytope.
  double residual;
  /// Witness strategy weights when feasible.
  std::vector<double> certificate;
};

/// Decides membership of p in the convex hull of deterministic-strategy
/// distributions by linear feasibility over strategy weights.
MembershipVerdict lhv_membership(const JointDistribution& p, const BellScenario& scenario);

struct ChshResult {
  double value;
  Direction a1, a2, b1, b2;
};

/// Maximum of E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2) over measurement
/// directions: spherical grid seeding plus alternating closed-form
/// refinement, deterministic for a fixed seed.
ChshResult chsh_optimize(const DensityMatrix& rho2, std::uint64_t seed = 0x5eed);

/// 3x3 correlation matrix T_mn = Tr((sigma_m (x) sigma_n) rho2).
Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho2);

/// floor(N_X / M): the most settings per region for which the constructive
/// LHV model covers M-body observables.
std::uint64_t settings_budget(std::uint64_t region_size, std::uint64_t body_count);

}  // namespace macrobell
