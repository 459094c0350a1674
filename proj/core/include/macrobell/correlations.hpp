#pragma once

// Correlation tensors of effective states, the Zukowski-Brukner sufficiency
// criterion for two-setting correlation experiments, and macroscopic
// magnetization correlations with their Bell combinations.

#include <map>
#include <utility>
#include <vector>

#include "macrobell/pauli.hpp"
#include "macrobell/states.hpp"

namespace macrobell {

/// Slack on the L <= 1 comparison; covers float accumulation across the
/// 2^K tensor entries.
inline constexpr double kZbTol = 1e-9;

/// T over the index set {x,y}^K, stored in lexicographic order with region 1
/// as the most significant index (x = 0, y = 1). One frame per region.
struct CorrelationTensor {
  std::vector<double> values;
  std::vector<MeasurementFrame> frames;

  int region_count() const;
  /// Entry for a specific axis choice per region (0 = x, 1 = y).
  double at(const std::vector<int>& axes) const;
};

/// T[i_1..i_K] = Tr((axis_1 . sigma (x) ... (x) axis_K . sigma) rho_eff).
CorrelationTensor correlation_tensor(const DensityMatrix& rho_eff,
                                     const std::vector<MeasurementFrame>& frames);

/// L = sum of squared tensor entries.
double zb_value(const CorrelationTensor& tensor);

/// Sufficient condition for an LHV model of the 2^K two-setting correlations:
/// true iff L <= 1 (+ tolerance). False is inconclusive on its own; the CHSH
/// optimizer provides the complementary violation witness.
bool zb_admits_lhv(const CorrelationTensor& tensor);

/// <M_a (x) M_b> between two regions, in units of spin-product counts.
struct MagnetizationCorrelation {
  double value;
  std::vector<int> region_sizes;
};

/// Computed along two independent routes that must agree within 1e-9:
/// the pairwise two-site sum over the full state, and
/// N_A N_B Tr((a.sigma (x) b.sigma) rho_eff). Returns the effective-state
/// route; disagreement signals an internal fault and throws.
MagnetizationCorrelation magnetization_correlation(const DensityMatrix& rho,
                                                   const Partition& partition,
                                                   const Direction& a, const Direction& b);
MagnetizationCorrelation magnetization_correlation(const PureState& psi,
                                                   const Partition& partition,
                                                   const Direction& a, const Direction& b);

/// Weights alpha(a, b) over setting-index pairs.
struct BellCoefficients {
  std::map<std::pair<int, int>, double> weights;
};

/// CHSH combination: +E(0,0) +E(0,1) +E(1,0) -E(1,1).
BellCoefficients chsh_coefficients();

/// <B> = sum alpha(a,b) E_ab. Every supported setting pair must have a
/// correlation value.
double macroscopic_bell_parameter(
    const BellCoefficients& coefficients,
    const std::map<std::pair<int, int>, MagnetizationCorrelation>& correlations);

}  // namespace macrobell
