#pragma once

// Dense small-N quantum states and the state-level machinery: partial traces,
// cross-region effective-state averaging, within-region permutation
// symmetrization, Heisenberg thermal states, and Werner twirling.
//
// Basis convention, fixed project-wide: qubit 0 is the MOST significant bit
// of the computational-basis index, so operators assemble as Kronecker
// products in qubit order.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "macrobell/pauli.hpp"
#include "macrobell/random.hpp"

namespace macrobell {

inline constexpr int kMaxDenseQubits = 12;   // DensityMatrix limit
inline constexpr int kMaxPureQubits = 20;    // PureState limit

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kAmplitudeNormTol = 1e-12;

class DensityMatrix {
 public:
  /// Checks dimension, Hermiticity and unit trace at construction. The
  /// positive-semidefiniteness check needs an eigendecomposition and is
  /// deferred to validate().
  explicit DensityMatrix(Eigen::MatrixXcd matrix);

  int qubit_count() const { return qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// Full invariant check including min eigenvalue >= -kPsdTol. Throws on
  /// violation.
  void validate() const;

  double min_eigenvalue() const;

 private:
  Eigen::MatrixXcd matrix_;
  int qubits_;
};

class PureState {
 public:
  explicit PureState(Eigen::VectorXcd amplitudes);

  int qubit_count() const { return qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  DensityMatrix to_density_matrix() const;

 private:
  Eigen::VectorXcd amplitudes_;
  int qubits_;
};

using AnyState = std::variant<PureState, DensityMatrix>;

int state_qubit_count(const AnyState& state);
DensityMatrix to_density(const AnyState& state);

/// Assignment of qubit indices to labeled regions. Regions are disjoint,
/// nonempty, and need not cover all qubits.
struct Partition {
  std::vector<std::vector<int>> regions;

  int region_count() const { return static_cast<int>(regions.size()); }
  int region_size(int r) const { return static_cast<int>(regions.at(r).size()); }

  /// Throws unless regions are nonempty, disjoint, sorted ascending, and
  /// within [0, qubit_count).
  void validate(int qubit_count) const;

  static Partition two_regions(std::vector<int> a, std::vector<int> b);
  /// Contiguous split {0..a_size-1 | a_size..a_size+b_size-1}.
  static Partition contiguous(const std::vector<int>& region_sizes);
};

/// A region whose elements are multi-qubit sites (blocks). Singleton sites
/// recover the plain qubit partition; larger sites carry the M-body scoping.
using SiteGroup = std::vector<std::vector<int>>;

/// Reduced state on `keep` (ascending qubit indices), qubit order preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep);

/// Relabels qubits: position q moves to new_position[q].
DensityMatrix permute_qubits(const DensityMatrix& rho, const std::vector<int>& new_position);
PureState permute_qubits(const PureState& psi, const std::vector<int>& new_position);

/// Uniform average of the cross-region reduced states, one qubit drawn from
/// each region: (1/prod N_k) sum over tuples of rho_{l_1..l_K}. Output qubit
/// k comes from region k. This is the state that carries everything
/// magnetization correlations can see.
DensityMatrix effective_state(const DensityMatrix& rho, const Partition& partition);
DensityMatrix effective_state(const PureState& psi, const Partition& partition);
DensityMatrix effective_state(const AnyState& state, const Partition& partition);

/// Site-level generalization: one site drawn per region, sites may span
/// several qubits. Output carries the sites in region order, qubits within a
/// site in the site's listed order.
DensityMatrix effective_state_over_sites(const DensityMatrix& rho,
                                         const std::vector<SiteGroup>& regions);

/// Uniform average over products of within-region permutations conjugating
/// rho. Exact enumeration for region sizes <= kExactSymmetrizeLimit, seeded
/// uniform sampling above.
inline constexpr int kExactSymmetrizeLimit = 5;
DensityMatrix permutation_symmetrize(const DensityMatrix& rho, const Partition& partition,
                                     int sample_count = 0, std::uint64_t seed = 0);

/// Site-level symmetrization: permutes whole sites within each region. All
/// sites of a region must have equal width.
DensityMatrix symmetrize_over_sites(const DensityMatrix& rho,
                                    const std::vector<SiteGroup>& regions);

struct HeisenbergCoupling {
  int a;
  int b;
  double strength;
};

/// exp(-beta H)/Z for H = sum_e J_e (XX + YY + ZZ)_e. Rotationally invariant
/// by construction; antiferromagnetic J > 0 on a pair has the singlet as its
/// ground state.
DensityMatrix heisenberg_thermal(int qubit_count, double beta,
                                 const std::vector<HeisenbergCoupling>& couplings);

/// Rotationally invariant two-qubit family V |psi-><psi-| + (1-V) I/4.
struct WernerState {
  double visibility;

  explicit WernerState(double v);
  DensityMatrix to_density_matrix() const;
};

inline constexpr double kWernerVisibilityMin = -1.0 / 3.0;

/// Projects a two-qubit state onto the Werner family. The twirl preserves
/// exactly the singlet overlap, so V = (4F - 1)/3 with F = <psi-|rho|psi->.
WernerState twirl_werner(const DensityMatrix& rho2);

/// Singlet fidelity <psi-|rho2|psi->.
double singlet_fidelity(const DensityMatrix& rho2);

/// Named fixture states: "singlet", "ghz", "w", "zero", "max_mixed",
/// "singlet_cover" (consecutive pairs in singlets, N even), "random_pure",
/// "random_mixed" (seeded).
AnyState named_state(const std::string& name, int qubit_count, std::uint64_t seed = 0);

// --- expectation helpers -----------------------------------------------------

/// Tr(P rho) for a Pauli string; real for Hermitian rho.
double expectation(const DensityMatrix& rho, const PauliString& p);
double expectation(const PureState& psi, const PauliString& p);

/// Tr(O rho) for a dense operator of matching dimension.
Complex expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& op);

/// Tr((A_q1 (x) B_q2) rho) for a two-site operator given as a 4x4 matrix with
/// q1 as the more significant local qubit. q1 != q2, order arbitrary.
Complex two_site_expectation(const DensityMatrix& rho, int q1, int q2,
                             const Eigen::Matrix4cd& op);
Complex two_site_expectation(const PureState& psi, int q1, int q2,
                             const Eigen::Matrix4cd& op);

/// Kronecker product helper (left factor on the most significant bits).
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Embeds a single-qubit operator at position q in an N-qubit register.
Eigen::MatrixXcd embed_one_site(int qubit_count, int q, const Eigen::Matrix2cd& op);

}  // namespace macrobell
