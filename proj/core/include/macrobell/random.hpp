#pragma once

// Seeded sampling utilities. All randomness in the project flows through
// explicit seeds; gaussians use an in-house Box-Muller so that streams do not
// depend on the standard library's distribution implementations.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "macrobell/pauli.hpp"

namespace macrobell {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Decorrelated child seed for trial `index` of a seeded sweep
  /// (splitmix64 finalizer over seed ^ f(index)).
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal via Box-Muller.
  double gaussian();

  Complex complex_gaussian();

  Direction direction();
  MeasurementFrame frame();

  /// Haar-random pure-state amplitudes of dimension `dim`.
  Eigen::VectorXcd haar_vector(int dim);

  /// Ginibre-induced random mixed state of dimension `dim` and given rank:
  /// G G^dagger normalized to unit trace.
  Eigen::MatrixXcd ginibre_density(int dim, int rank);

  /// Haar-random unitary (QR of a Ginibre matrix with phase fixing).
  Eigen::MatrixXcd haar_unitary(int dim);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace macrobell
