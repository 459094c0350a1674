#include "macrobell/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace macrobell {

namespace {
constexpr Complex kI{0.0, 1.0};
}

char pauli_to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  throw std::logic_error("unreachable Pauli label");
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("unknown Pauli label '") + c + "'");
  }
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (p) {
    case Pauli::I:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

PauliString::PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw std::invalid_argument("PauliString needs at least one qubit");
  }
}

PauliString PauliString::identity(int qubit_count) {
  if (qubit_count < 1) {
    throw std::invalid_argument("PauliString needs at least one qubit");
  }
  return PauliString(std::vector<Pauli>(qubit_count, Pauli::I));
}

PauliString PauliString::from_string(const std::string& labels) {
  std::vector<Pauli> out;
  out.reserve(labels.size());
  for (char c : labels) out.push_back(pauli_from_char(c));
  return PauliString(std::move(out));
}

std::vector<int> PauliString::support() const {
  std::vector<int> qubits;
  for (int q = 0; q < qubit_count(); ++q) {
    if (labels_[q] != Pauli::I) qubits.push_back(q);
  }
  return qubits;
}

bool PauliString::anticommutes_with(const PauliString& other) const {
  if (qubit_count() != other.qubit_count()) {
    throw std::invalid_argument("anticommutes: qubit counts differ");
  }
  int differing = 0;
  for (int q = 0; q < qubit_count(); ++q) {
    const Pauli a = labels_[q];
    const Pauli b = other.labels_[q];
    if (a != Pauli::I && b != Pauli::I && a != b) ++differing;
  }
  return (differing % 2) == 1;
}

Eigen::MatrixXcd PauliString::to_matrix() const {
  constexpr int kMaxMatrixQubits = 12;
  if (qubit_count() > kMaxMatrixQubits) {
    throw std::invalid_argument("PauliString::to_matrix beyond dense limit");
  }
  // Qubit 0 is the most significant position of the basis index, so the
  // string expands left-to-right as a Kronecker product.
  Eigen::MatrixXcd m = pauli_matrix(labels_[0]);
  for (int q = 1; q < qubit_count(); ++q) {
    const Eigen::Matrix2cd f = pauli_matrix(labels_[q]);
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        next.block(2 * r, 2 * c, 2, 2) = m(r, c) * f;
      }
    }
    m.swap(next);
  }
  return m;
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(labels_.size());
  for (Pauli p : labels_) s.push_back(pauli_to_char(p));
  return s;
}

bool anticommutes(const PauliString& p, const PauliString& q) {
  return p.anticommutes_with(q);
}

Direction::Direction(double x, double y, double z) : Direction(Eigen::Vector3d(x, y, z)) {}

Direction::Direction(const Eigen::Vector3d& vec) : v(vec) {
  if (std::abs(v.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("invalid direction: vector is not unit length");
  }
}

Direction Direction::normalized(const Eigen::Vector3d& vec) {
  const double n = vec.norm();
  if (n == 0.0) {
    throw std::invalid_argument("invalid direction: zero vector");
  }
  return Direction(Eigen::Vector3d(vec / n));
}

Eigen::Matrix2cd direction_observable(const Direction& a) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m += a.v.x() * pauli_matrix(Pauli::X);
  m += a.v.y() * pauli_matrix(Pauli::Y);
  m += a.v.z() * pauli_matrix(Pauli::Z);
  return m;
}

MeasurementFrame::MeasurementFrame(Direction x, Direction y)
    : x_axis(std::move(x)), y_axis(std::move(y)) {
  if (std::abs(x_axis.dot(y_axis)) > kOrthogonalityTol) {
    throw std::invalid_argument("measurement frame axes are not orthogonal");
  }
}

MeasurementFrame frame_from_settings(const Direction& a1, const Direction& a2) {
  const Eigen::Vector3d sum = a1.v + a2.v;
  const Eigen::Vector3d diff = a1.v - a2.v;
  constexpr double kDegenerateTol = 1e-12;
  if (sum.norm() < kDegenerateTol || diff.norm() < kDegenerateTol) {
    throw std::invalid_argument("degenerate settings: a1 = +-a2 has no frame");
  }
  return MeasurementFrame(Direction::normalized(sum), Direction::normalized(diff));
}

}  // namespace macrobell
