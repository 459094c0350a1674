#pragma once

// Monogamy of correlations: squared-norm bounds on expectation vectors of
// anti-commuting families, the bipartite P/Q vector decomposition as an
// executable check of the no-violation proof, singlet-monogamy visibility
// caps, and Werner-state LHV classification.

#include <vector>

#include "macrobell/anticommuting.hpp"
#include "macrobell/correlations.hpp"
#include "macrobell/states.hpp"

namespace macrobell {

/// External LHV thresholds for the two-qubit Werner family: below 5/12 no
/// violation exists for any POVM strategy; below 2/3 none for projective
/// measurements. Consumed as constants.
inline constexpr double kPovmLhvThreshold = 5.0 / 12.0;
inline constexpr double kProjectiveLhvThreshold = 2.0 / 3.0;
inline constexpr double kThresholdSlack = 1e-12;

/// Expectation values of one operator family's members on one state.
struct ExpectationVector {
  std::vector<double> components;

  double squared_norm() const;
};

/// <O_i> for every expanded sequence of the family; the squared norm is
/// bounded by 1 whenever the family is mutually anti-commuting.
ExpectationVector expectation_vector(const DensityMatrix& rho, const OperatorFamily& family);
ExpectationVector expectation_vector(const PureState& psi, const OperatorFamily& family);

/// The bipartite no-violation bound computed through the P/Q decomposition:
/// per-pair correlation tensors are grouped into vectors
///   P(i,j) = (T_xx(i,j),  T_xy(i,j),  T_yx(i,j+1), T_yy(i,j+1))
///   Q(i,j) = (T_xx(i,j+1), T_xy(i,j+1), T_yx(i,j),  T_yy(i,j))
/// with j+1 cyclic within the second region, and
///   L = (1/2 N_A^2 N_B^2) sum_{ii'jj'} P(i,j).P(i',j') + Q(i,j).Q(i',j').
/// Each vector collects expectations of four mutually anti-commuting
/// operators, so its length is at most one and L <= 1. Equals the ZB value of
/// the effective state; the two routes are compared in tests.
///
/// The pairing needs two qubits on one side: regions are swapped internally
/// when only the first has >= 2 qubits, and both regions of size one is an
/// error.
double pq_bound(const DensityMatrix& rho, const Partition& partition,
                const std::vector<MeasurementFrame>& frames);
double pq_bound(const PureState& psi, const Partition& partition,
                const std::vector<MeasurementFrame>& frames);

/// Visibility cap (R+2)/(3R) with R = max(N_A, N_B), from singlet monogamy.
struct VisibilityCap {
  double cap;
  int region_a_size;
  int region_b_size;
};

VisibilityCap singlet_monogamy_cap(int region_a_size, int region_b_size);

enum class WernerClass {
  kNoPovmViolation,        // V <= 5/12
  kNoProjectiveViolation,  // 5/12 < V <= 2/3
  kUnconstrained,          // V > 2/3
};

struct WernerClassification {
  WernerClass cls;
  /// V above (R+2)/(3R): no underlying state on these region sizes can
  /// produce this effective visibility.
  bool exceeds_monogamy_cap;
  VisibilityCap cap;
};

WernerClassification werner_classify(double visibility, int region_a_size, int region_b_size);

/// Visibility of the twirled effective state. For rotationally invariant
/// inputs this obeys the singlet-monogamy cap.
double max_effective_visibility(const DensityMatrix& rho, const Partition& partition);

}  // namespace macrobell
