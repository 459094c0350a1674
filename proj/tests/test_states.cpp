#include "macrobell/states.hpp"

#include <doctest.h>

#include <cmath>

#include "macrobell/io.hpp"
#include "macrobell/random.hpp"

using namespace macrobell;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd singlet_projector() {
  const PureState s = std::get<PureState>(named_state("singlet", 2));
  return s.amplitudes() * s.amplitudes().adjoint();
}

}  // namespace

TEST_CASE("partial trace on named states") {
  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  CHECK(max_abs_diff(partial_trace(singlet, {0}).matrix(),
                     Eigen::MatrixXcd::Identity(2, 2) / 2.0) < 1e-12);

  // |0><0| (x) |1><1|
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(1) = 1.0;
  const PureState zero_one(amps);
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(2, 2);
  one(1, 1) = 1.0;
  CHECK(max_abs_diff(partial_trace(zero_one, {1}).matrix(), one) < 1e-12);

  // GHZ3 reduced to the first two qubits.
  const PureState ghz = std::get<PureState>(named_state("ghz", 3));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(0, 0) = 0.5;
  expected(3, 3) = 0.5;
  CHECK(max_abs_diff(partial_trace(ghz, {0, 1}).matrix(), expected) < 1e-12);

  CHECK_THROWS_AS(partial_trace(singlet, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(singlet, {0, 5}), std::invalid_argument);
}

TEST_CASE("partial trace agrees between pure and dense paths") {
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const PureState psi(rng.haar_vector(1 << 4));
    const DensityMatrix rho = psi.to_density_matrix();
    for (const std::vector<int>& keep :
         {std::vector<int>{0}, {2}, {0, 3}, {1, 2}, {0, 1, 3}}) {
      CHECK(max_abs_diff(partial_trace(psi, keep).matrix(),
                         partial_trace(rho, keep).matrix()) < 1e-11);
    }
  }
}

TEST_CASE("effective state of identical products and the singlet pair") {
  Rng rng(7);
  // Product of identical single-qubit states: any 2-partition gives sigma x sigma.
  const Eigen::MatrixXcd sigma = rng.ginibre_density(2, 2);
  Eigen::MatrixXcd prod = sigma;
  for (int q = 1; q < 4; ++q) prod = kron(prod, sigma);
  const DensityMatrix rho(prod);
  const DensityMatrix eff = effective_state(rho, Partition{{{0, 2}, {1, 3}}});
  CHECK(max_abs_diff(eff.matrix(), kron(sigma, sigma)) < 1e-11);

  const DensityMatrix singlet = to_density(named_state("singlet", 2));
  CHECK(max_abs_diff(effective_state(singlet, Partition{{{0}, {1}}}).matrix(),
                     singlet.matrix()) < 1e-12);
}

TEST_CASE("effective state of singlet (x) |0>: two-term averaging oracle") {
  // rho = |psi-><psi-|_{01} (x) |0><0|_2 with A = {0}, B = {1, 2}.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  amps(2) = 1.0 / std::sqrt(2.0);   // |010>
  amps(4) = -1.0 / std::sqrt(2.0);  // |100>
  const PureState psi(amps);

  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
  zero(0, 0) = 1.0;
  const Eigen::MatrixXcd expected =
      0.5 * (singlet_projector() + kron(Eigen::MatrixXcd::Identity(2, 2) / 2.0, zero));

  const DensityMatrix eff = effective_state(psi, Partition{{{0}, {1, 2}}});
  CHECK(max_abs_diff(eff.matrix(), expected) < 1e-12);
  eff.validate();
}

TEST_CASE("effective state is linear and produces valid density matrices") {
  Rng rng(55);
  const Partition partition{{{0, 1}, {2, 3, 4}}};
  const DensityMatrix rho1(rng.ginibre_density(32, 8));
  const DensityMatrix rho2(rng.ginibre_density(32, 32));
  const double alpha = 0.3;
  const DensityMatrix mix(alpha * rho1.matrix() + (1 - alpha) * rho2.matrix());

  const Eigen::MatrixXcd lhs = effective_state(mix, partition).matrix();
  const Eigen::MatrixXcd rhs = alpha * effective_state(rho1, partition).matrix() +
                               (1 - alpha) * effective_state(rho2, partition).matrix();
  CHECK(max_abs_diff(lhs, rhs) < 1e-10);

  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 5;
    const DensityMatrix rho(rng.ginibre_density(1 << n, std::min(1 << n, 8)));
    const int a_size = 1 + trial % (n - 1);
    std::vector<int> a, b;
    for (int q = 0; q < n; ++q) (q < a_size ? a : b).push_back(q);
    const DensityMatrix eff = effective_state(rho, Partition{{a, b}});
    eff.validate();
    CHECK(std::abs(eff.matrix().trace().real() - 1.0) < 1e-10);
  }
}

TEST_CASE("permutation symmetrization reproduces every cross reduction") {
  Rng rng(99);
  const Partition partition{{{0, 1}, {2, 3}}};
  const DensityMatrix rho(rng.ginibre_density(16, 16));
  const DensityMatrix sym = permutation_symmetrize(rho, partition);
  sym.validate();
  CHECK(std::abs(sym.matrix().trace().real() - 1.0) < 1e-10);

  const DensityMatrix eff = effective_state(rho, partition);
  for (int i : {0, 1}) {
    for (int j : {2, 3}) {
      DensityMatrix pair = partial_trace(sym, {i, j});
      CHECK(max_abs_diff(pair.matrix(), eff.matrix()) < 1e-10);
    }
  }

  // Idempotence and the single-qubit-regions fixed point.
  const DensityMatrix twice = permutation_symmetrize(sym, partition);
  CHECK(max_abs_diff(twice.matrix(), sym.matrix()) < 1e-11);

  const DensityMatrix rho2(rng.ginibre_density(4, 4));
  CHECK(max_abs_diff(permutation_symmetrize(rho2, Partition{{{0}, {1}}}).matrix(),
                     rho2.matrix()) < 1e-12);
}

TEST_CASE("heisenberg thermal states") {
  // Infinite temperature: maximally mixed.
  const DensityMatrix hot = heisenberg_thermal(3, 0.0, {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(max_abs_diff(hot.matrix(), Eigen::MatrixXcd::Identity(8, 8) / 8.0) < 1e-12);

  // Antiferromagnetic pair at low temperature approaches the singlet; the
  // eigendecomposition of H is the oracle for the ground state.
  const DensityMatrix cold = heisenberg_thermal(2, 50.0, {{0, 1, 1.0}});
  CHECK(max_abs_diff(cold.matrix(), singlet_projector()) < 1e-9);

  // Collective rotations commute with the thermal state.
  Rng rng(13);
  const DensityMatrix rho = heisenberg_thermal(3, 0.7, {{0, 1, 1.0}, {1, 2, 0.5}, {0, 2, -0.3}});
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXcd u = rng.haar_unitary(2);
    Eigen::MatrixXcd collective = u;
    for (int q = 1; q < 3; ++q) collective = kron(collective, u);
    CHECK(max_abs_diff(collective * rho.matrix() * collective.adjoint(), rho.matrix()) < 1e-9);
  }

  CHECK_THROWS_AS(heisenberg_thermal(2, 1.0, {{0, 0, 1.0}}), std::invalid_argument);
}

TEST_CASE("werner twirl: fidelity map, range, and round trip") {
  CHECK(twirl_werner(to_density(named_state("singlet", 2))).visibility ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(twirl_werner(to_density(named_state("max_mixed", 2))).visibility ==
        doctest::Approx(0.0).epsilon(1e-12));

  // |00>: zero singlet overlap pushes V to the bottom of the Werner range.
  const DensityMatrix zz = to_density(named_state("zero", 2));
  CHECK(twirl_werner(zz).visibility == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const double v = -1.0 / 3.0 + rng.uniform() * (4.0 / 3.0);
    const WernerState w(v);
    CHECK(twirl_werner(w.to_density_matrix()).visibility == doctest::Approx(v).epsilon(1e-12));

    // The Werner family is rotationally invariant: U (x) U conjugation
    // leaves the visibility untouched.
    const Eigen::MatrixXcd u = rng.haar_unitary(2);
    const Eigen::MatrixXcd uu = kron(u, u);
    const DensityMatrix rotated(uu * w.to_density_matrix().matrix() * uu.adjoint());
    CHECK(twirl_werner(rotated).visibility == doctest::Approx(v).epsilon(1e-10));
  }

  CHECK_THROWS_AS(WernerState(1.5), std::invalid_argument);
  CHECK_THROWS_AS(WernerState(-0.5), std::invalid_argument);
}

TEST_CASE("named states") {
  const PureState singlet = std::get<PureState>(named_state("singlet", 2));
  CHECK(singlet.amplitudes()(0) == Complex(0, 0));
  CHECK(singlet.amplitudes()(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(singlet.amplitudes()(2).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(singlet.amplitudes()(3) == Complex(0, 0));

  const PureState ghz = std::get<PureState>(named_state("ghz", 3));
  CHECK(ghz.amplitudes()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(ghz.amplitudes()(7).real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  const DensityMatrix mixed = std::get<DensityMatrix>(named_state("max_mixed", 2));
  CHECK(max_abs_diff(mixed.matrix(), Eigen::MatrixXcd::Identity(4, 4) / 4.0) == 0.0);

  // Singlet cover: consecutive pairs are exact singlets.
  const PureState cover = std::get<PureState>(named_state("singlet_cover", 4));
  CHECK(max_abs_diff(partial_trace(cover, {0, 1}).matrix(), singlet_projector()) < 1e-12);
  CHECK(max_abs_diff(partial_trace(cover, {2, 3}).matrix(), singlet_projector()) < 1e-12);

  CHECK_THROWS_AS(named_state("nope", 2), std::invalid_argument);
  CHECK_THROWS_AS(named_state("singlet", 3), std::invalid_argument);
  CHECK_THROWS_AS(named_state("random_mixed", 13), std::invalid_argument);
}

TEST_CASE("pauli expectations match the dense operator oracle") {
  Rng rng(31);
  const DensityMatrix rho(rng.ginibre_density(8, 8));
  const PureState psi(rng.haar_vector(8));
  for (const char* labels : {"XYZ", "IXI", "ZZY", "YIX", "III", "XXX"}) {
    const PauliString p = PauliString::from_string(labels);
    const Eigen::MatrixXcd dense = p.to_matrix();
    CHECK(expectation(rho, p) ==
          doctest::Approx((dense * rho.matrix()).trace().real()).epsilon(1e-12));
    const Complex direct = psi.amplitudes().adjoint() * dense * psi.amplitudes();
    CHECK(expectation(psi, p) == doctest::Approx(direct.real()).epsilon(1e-12));
  }
}

TEST_CASE("two-site expectations match embedded dense operators") {
  Rng rng(77);
  const int n = 4;
  const DensityMatrix rho(rng.ginibre_density(1 << n, 6));
  const PureState psi(rng.haar_vector(1 << n));
  const Eigen::Matrix4cd op = kron(direction_observable(rng.direction()),
                                   direction_observable(rng.direction()));
  for (auto [q1, q2] : std::vector<std::pair<int, int>>{{0, 1}, {1, 3}, {3, 0}, {2, 1}}) {
    // Dense oracle: scatter the two-site operator into the full register.
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
    for (int row = 0; row < (1 << n); ++row) {
      for (int col = 0; col < (1 << n); ++col) {
        bool same = true;
        for (int q = 0; q < n; ++q) {
          if (q == q1 || q == q2) continue;
          if (((row >> (n - 1 - q)) & 1) != ((col >> (n - 1 - q)) & 1)) same = false;
        }
        if (!same) continue;
        const int r4 = (((row >> (n - 1 - q1)) & 1) << 1) | ((row >> (n - 1 - q2)) & 1);
        const int c4 = (((col >> (n - 1 - q1)) & 1) << 1) | ((col >> (n - 1 - q2)) & 1);
        dense(row, col) = op(r4, c4);
      }
    }
    const Complex want = (dense * rho.matrix()).trace();
    const Complex got = two_site_expectation(rho, q1, q2, op);
    CHECK(std::abs(want - got) < 1e-12);
    const Complex want_pure = psi.amplitudes().adjoint() * dense * psi.amplitudes();
    CHECK(std::abs(want_pure - two_site_expectation(psi, q1, q2, op)) < 1e-12);
  }
}

TEST_CASE("state json round trip is exact") {
  Rng rng(1234);
  const AnyState pure = PureState(rng.haar_vector(8));
  const AnyState back = state_from_json(state_to_json(pure));
  CHECK((std::get<PureState>(back).amplitudes() - std::get<PureState>(pure).amplitudes())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const AnyState mixed = DensityMatrix(rng.ginibre_density(4, 4));
  const AnyState back2 = state_from_json(state_to_json(mixed));
  CHECK(max_abs_diff(std::get<DensityMatrix>(back2).matrix(),
                     std::get<DensityMatrix>(mixed).matrix()) == 0.0);

  CHECK_THROWS(state_from_json("{\"qubits\": 2, \"kind\": \"banana\", \"data\": []}"));
}

TEST_CASE("density matrix invariants are enforced") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(4, 4);
  CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);  // trace 4

  Eigen::MatrixXcd nonherm = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  nonherm(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_AS(DensityMatrix{nonherm}, std::invalid_argument);

  Eigen::MatrixXcd negative = Eigen::MatrixXcd::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(negative).validate(), std::runtime_error);

  CHECK_THROWS_AS(PureState(Eigen::VectorXcd::Zero(4)), std::invalid_argument);
}
