#include "macrobell/correlations.hpp"

#include <doctest.h>

#include <cmath>

#include "macrobell/io.hpp"
#include "macrobell/random.hpp"

using namespace macrobell;

namespace {

const MeasurementFrame kXyFrame{Direction(1, 0, 0), Direction(0, 1, 0)};

// Direct expectation oracle for one tensor entry: explicit Kronecker build.
double tensor_entry_oracle(const DensityMatrix& rho_eff,
                           const std::vector<MeasurementFrame>& frames,
                           const std::vector<int>& axes) {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t r = 0; r < frames.size(); ++r) {
    op = kron(op, direction_observable(frames[r].axis(axes[r])));
  }
  return (op * rho_eff.matrix()).trace().real();
}

}  // namespace

TEST_CASE("correlation tensor of named states") {
  const DensityMatrix mixed = to_density(named_state("max_mixed", 2));
  const CorrelationTensor zeros = correlation_tensor(mixed, {kXyFrame, kXyFrame});
  for (double v : zeros.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));

  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  const CorrelationTensor t = correlation_tensor(singlet, {kXyFrame, kXyFrame});
  CHECK(t.at({0, 0}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t.at({1, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t.at({0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.at({1, 0}) == doctest::Approx(0.0).epsilon(1e-12));

  // Product |00> has vanishing x/y expectations.
  const DensityMatrix zz = to_density(named_state("zero", 2));
  for (double v : correlation_tensor(zz, {kXyFrame, kXyFrame}).values) {
    CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  }

  CHECK_THROWS_AS(correlation_tensor(singlet, {kXyFrame}), std::invalid_argument);
}

TEST_CASE("tensor entries match the direct oracle and stay within [-1, 1]") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 2 + trial % 3;
    const DensityMatrix rho(rng.ginibre_density(1 << k, 1 << k));
    std::vector<MeasurementFrame> frames;
    for (int r = 0; r < k; ++r) frames.push_back(rng.frame());
    const CorrelationTensor t = correlation_tensor(rho, frames);
    CHECK(static_cast<int>(t.values.size()) == (1 << k));
    for (std::size_t flat = 0; flat < t.values.size(); ++flat) {
      std::vector<int> axes(k);
      for (int r = 0; r < k; ++r) axes[r] = static_cast<int>((flat >> (k - 1 - r)) & 1);
      CHECK(t.values[flat] == doctest::Approx(tensor_entry_oracle(rho, frames, axes))
                                  .epsilon(1e-12));
      CHECK(std::abs(t.values[flat]) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("zb value and the LHV sufficiency threshold") {
  CorrelationTensor zero;
  zero.frames = {kXyFrame, kXyFrame};
  zero.values = {0, 0, 0, 0};
  CHECK(zb_value(zero) == 0.0);
  CHECK(zb_admits_lhv(zero));

  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  const CorrelationTensor t = correlation_tensor(singlet, {kXyFrame, kXyFrame});
  CHECK(zb_value(t) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(zb_admits_lhv(t));

  // Effective state of singlet (x) |0> with B = {1, 2}: entries halve, L = 1/2.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  amps(2) = 1.0 / std::sqrt(2.0);
  amps(4) = -1.0 / std::sqrt(2.0);
  const DensityMatrix eff = effective_state(PureState(amps), Partition{{{0}, {1, 2}}});
  const CorrelationTensor t_eff = correlation_tensor(eff, {kXyFrame, kXyFrame});
  CHECK(t_eff.at({0, 0}) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(zb_value(t_eff) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(zb_admits_lhv(t_eff));
}

TEST_CASE("zb criterion holds on effective states with both regions >= 2") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + trial % 3;
    const AnyState state =
        (trial % 2 == 0)
            ? AnyState(PureState(rng.haar_vector(1 << n)))
            : AnyState(DensityMatrix(rng.ginibre_density(1 << n, 4)));
    std::vector<int> a, b;
    for (int q = 0; q < n; ++q) (q % 2 == 0 ? a : b).push_back(q);
    const DensityMatrix eff = effective_state(state, Partition{{a, b}});
    for (int f = 0; f < 10; ++f) {
      const CorrelationTensor t = correlation_tensor(eff, {rng.frame(), rng.frame()});
      CHECK(zb_value(t) <= 1.0 + kZbTol);
      CHECK(zb_admits_lhv(t));
    }
  }
}

TEST_CASE("magnetization correlations: named values and the dual route") {
  // All-|0> product, both settings along z: every pair contributes +1.
  const PureState zeros = std::get<PureState>(named_state("zero", 5));
  const Partition partition{{{0, 1}, {2, 3, 4}}};
  const MagnetizationCorrelation m = magnetization_correlation(
      zeros.to_density_matrix(), partition, Direction(0, 0, 1), Direction(0, 0, 1));
  CHECK(m.value == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(m.region_sizes == std::vector<int>{2, 3});

  // Singlet pair with equal settings: -1 for any direction.
  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Direction a = rng.direction();
    const MagnetizationCorrelation ms =
        magnetization_correlation(singlet, Partition{{{0}, {1}}}, a, a);
    CHECK(ms.value == doctest::Approx(-1.0).epsilon(1e-12));
  }

  // Dual-route agreement on random six-qubit states (the routes are checked
  // internally; this exercises them across partitions and directions).
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho(rng.ginibre_density(64, 16));
    const MagnetizationCorrelation mc = magnetization_correlation(
        rho, Partition{{{0, 2, 4}, {1, 3, 5}}}, rng.direction(), rng.direction());
    CHECK(std::abs(mc.value) <= 9.0 + 1e-9);
  }
}

TEST_CASE("macroscopic Bell parameter with CHSH coefficients") {
  const BellCoefficients chsh = chsh_coefficients();

  std::map<std::pair<int, int>, MagnetizationCorrelation> empty_support;
  const BellCoefficients none{};
  CHECK(macroscopic_bell_parameter(none, empty_support) == 0.0);

  // Singlet at the standard optimal settings reaches 2 sqrt 2.
  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  const Partition pair{{{0}, {1}}};
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Direction> alice{Direction(0, 0, 1), Direction(1, 0, 0)};
  const std::vector<Direction> bob{Direction(-s, 0, -s), Direction(s, 0, -s)};
  std::map<std::pair<int, int>, MagnetizationCorrelation> corr;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      corr[{i, j}] = magnetization_correlation(singlet, pair, alice[i], bob[j]);
    }
  }
  CHECK(macroscopic_bell_parameter(chsh, corr) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  // Product states never beat the classical bound: sampled check.
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXcd q0 = rng.haar_vector(2);
    Eigen::VectorXcd q1 = rng.haar_vector(2);
    Eigen::VectorXcd amps(4);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) amps(i * 2 + j) = q0(i) * q1(j);
    }
    const DensityMatrix product = PureState(amps).to_density_matrix();
    std::map<std::pair<int, int>, MagnetizationCorrelation> pc;
    const std::vector<Direction> da{rng.direction(), rng.direction()};
    const std::vector<Direction> db{rng.direction(), rng.direction()};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        pc[{i, j}] = magnetization_correlation(product, pair, da[i], db[j]);
      }
    }
    CHECK(std::abs(macroscopic_bell_parameter(chsh, pc)) <= 2.0 + 1e-9);
  }

  // Missing correlation for a supported pair is an error.
  corr.erase({1, 1});
  CHECK_THROWS_AS(macroscopic_bell_parameter(chsh, corr), std::invalid_argument);
}

TEST_CASE("tensor serialization carries values and frames") {
  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  const CorrelationTensor t = correlation_tensor(singlet, {kXyFrame, kXyFrame});
  const std::string json = tensor_to_json(t);
  CHECK(json.find("\"regions\":2") != std::string::npos);
  CHECK(json.find("\"values\"") != std::string::npos);
  CHECK(json.find("\"frames\"") != std::string::npos);
}
