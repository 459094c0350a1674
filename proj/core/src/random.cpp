#include "macrobell/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace macrobell {

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im);
}

Direction Rng::direction() {
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(gaussian(), gaussian(), gaussian());
  } while (v.norm() < 1e-8);
  return Direction::normalized(v);
}

MeasurementFrame Rng::frame() {
  const Direction x = direction();
  Eigen::Vector3d y;
  do {
    const Direction raw = direction();
    y = raw.v - raw.v.dot(x.v) * x.v;
  } while (y.norm() < 1e-8);
  return MeasurementFrame(x, Direction::normalized(y));
}

Eigen::VectorXcd Rng::haar_vector(int dim) {
  Eigen::VectorXcd psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = complex_gaussian();
  psi.normalize();
  return psi;
}

Eigen::MatrixXcd Rng::ginibre_density(int dim, int rank) {
  if (rank < 1 || rank > dim) throw std::invalid_argument("ginibre_density: bad rank");
  Eigen::MatrixXcd g(dim, rank);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < rank; ++c) g(r, c) = complex_gaussian();
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

Eigen::MatrixXcd Rng::haar_unitary(int dim) {
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = complex_gaussian();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution is Haar, not merely QR-of-Ginibre.
  for (int c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0) q.col(c) *= d / mag;
  }
  return q;
}

}  // namespace macrobell
