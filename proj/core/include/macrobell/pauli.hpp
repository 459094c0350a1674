#pragma once

// Pauli-label algebra: multi-qubit Pauli strings with a parity-based
// anti-commutation test, unit direction vectors, and the orthogonal x/y
// measurement frames built from pairs of setting directions.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace macrobell {

using Complex = std::complex<double>;

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kOrthogonalityTol = 1e-10;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_to_char(Pauli p);
Pauli pauli_from_char(char c);

/// 2x2 matrix representation of a single Pauli label.
Eigen::Matrix2cd pauli_matrix(Pauli p);

/// Tensor product of single-qubit Pauli labels, one per qubit. Represents a
/// Hermitian involution; no global phase is stored (phase bookkeeping of
/// pairwise products is the caller's business).
class PauliString {
 public:
  explicit PauliString(std::vector<Pauli> labels);
  static PauliString identity(int qubit_count);
  static PauliString from_string(const std::string& labels);

  int qubit_count() const { return static_cast<int>(labels_.size()); }
  Pauli label(int qubit) const { return labels_.at(qubit); }
  const std::vector<Pauli>& labels() const { return labels_; }

  /// Qubits carrying a non-identity label.
  std::vector<int> support() const;

  /// True iff PQ = -QP. Parity rule: count positions where both labels are
  /// non-identity and differ; odd count means anti-commutation. No matrices.
  bool anticommutes_with(const PauliString& other) const;

  /// Dense 2^N x 2^N representation. Guarded by the dense-qubit limit.
  Eigen::MatrixXcd to_matrix() const;

  std::string str() const;

  bool operator==(const PauliString& other) const = default;

 private:
  std::vector<Pauli> labels_;
};

bool anticommutes(const PauliString& p, const PauliString& q);

/// Unit vector in R^3 (tolerance kUnitNormTol, enforced at construction).
struct Direction {
  Eigen::Vector3d v;

  Direction(double x, double y, double z);
  explicit Direction(const Eigen::Vector3d& vec);

  /// Rescales an arbitrary nonzero vector to unit length.
  static Direction normalized(const Eigen::Vector3d& vec);

  double dot(const Direction& other) const { return v.dot(other.v); }
};

/// a . sigma for a unit direction a; Hermitian with eigenvalues +-1.
Eigen::Matrix2cd direction_observable(const Direction& a);

/// Orthogonal local x/y axes (tolerance kOrthogonalityTol).
struct MeasurementFrame {
  Direction x_axis;
  Direction y_axis;

  MeasurementFrame(Direction x, Direction y);

  const Direction& axis(int i) const { return i == 0 ? x_axis : y_axis; }
};

/// Frame along the sum and difference of two setting directions:
/// x ~ a1 + a2, y ~ a1 - a2, both normalized. Settings need not be
/// orthogonal; a1 = +-a2 is degenerate and throws.
MeasurementFrame frame_from_settings(const Direction& a1, const Direction& a2);

}  // namespace macrobell
