#include "macrobell/pauli.hpp"

#include <doctest.h>

#include <cmath>

#include "macrobell/random.hpp"

using namespace macrobell;

namespace {

// Independent dense oracle: PQ + QP vanishes exactly when the strings
// anti-commute.
bool matrix_anticommutes(const PauliString& p, const PauliString& q) {
  const Eigen::MatrixXcd pm = p.to_matrix();
  const Eigen::MatrixXcd qm = q.to_matrix();
  return (pm * qm + qm * pm).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

TEST_CASE("pauli matrices have the standard form") {
  CHECK((pauli_matrix(Pauli::I) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::Matrix2cd z = pauli_matrix(Pauli::Z);
  CHECK(z(0, 0) == Complex(1, 0));
  CHECK(z(1, 1) == Complex(-1, 0));
  CHECK(z(0, 1) == Complex(0, 0));

  const Eigen::Matrix2cd x = pauli_matrix(Pauli::X);
  CHECK(x(0, 1) == Complex(1, 0));
  CHECK(x(1, 0) == Complex(1, 0));
  CHECK(x(0, 0) == Complex(0, 0));

  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    const Eigen::Matrix2cd m = pauli_matrix(p);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(m.trace()) < 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m);
    CHECK(solver.eigenvalues()(0) == doctest::Approx(-1.0));
    CHECK(solver.eigenvalues()(1) == doctest::Approx(1.0));
  }
}

TEST_CASE("direction observable is a . sigma with unit eigenvalues") {
  CHECK((direction_observable(Direction(0, 0, 1)) - pauli_matrix(Pauli::Z))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((direction_observable(Direction(1, 0, 0)) - pauli_matrix(Pauli::X))
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(direction_observable(rng.direction()));
    CHECK(solver.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(solver.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(Direction(0.5, 0, 0), std::invalid_argument);
}

TEST_CASE("single-qubit anti-commutation over all label pairs") {
  const Pauli nonid[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (Pauli a : nonid) {
    for (Pauli b : nonid) {
      const PauliString p({a});
      const PauliString q({b});
      CHECK(anticommutes(p, q) == (a != b));
      CHECK(anticommutes(p, q) == matrix_anticommutes(p, q));
    }
  }
}

TEST_CASE("parity rule matches the dense oracle exhaustively on {I,X,Y}^4") {
  const Pauli labels[3] = {Pauli::I, Pauli::X, Pauli::Y};
  std::vector<PauliString> strings;
  for (int code = 0; code < 81; ++code) {
    int c = code;
    std::vector<Pauli> ls;
    for (int q = 0; q < 4; ++q) {
      ls.push_back(labels[c % 3]);
      c /= 3;
    }
    strings.emplace_back(std::move(ls));
  }
  for (std::size_t i = 0; i < strings.size(); ++i) {
    for (std::size_t j = i; j < strings.size(); ++j) {
      CHECK(anticommutes(strings[i], strings[j]) == matrix_anticommutes(strings[i], strings[j]));
    }
  }
}

TEST_CASE("named anti-commutation cases") {
  CHECK(anticommutes(PauliString::from_string("X"), PauliString::from_string("Y")));
  CHECK_FALSE(anticommutes(PauliString::from_string("XX"), PauliString::from_string("YY")));
  CHECK(matrix_anticommutes(PauliString::from_string("XX"), PauliString::from_string("YY")) ==
        false);
  CHECK_FALSE(anticommutes(PauliString::from_string("XI"), PauliString::from_string("IY")));
  CHECK_THROWS_AS(anticommutes(PauliString::from_string("X"), PauliString::from_string("XX")),
                  std::invalid_argument);
}

TEST_CASE("frames from settings lie along sum and difference") {
  const MeasurementFrame f = frame_from_settings(Direction(1, 0, 0), Direction(0, 1, 0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(f.x_axis.v.isApprox(Eigen::Vector3d(s, s, 0), 1e-12));
  CHECK(f.y_axis.v.isApprox(Eigen::Vector3d(s, -s, 0), 1e-12));

  CHECK_THROWS_AS(frame_from_settings(Direction(0, 0, 1), Direction(0, 0, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(frame_from_settings(Direction(0, 0, 1), Direction(0, 0, -1)),
                  std::invalid_argument);

  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Direction a1 = rng.direction();
    const Direction a2 = rng.direction();
    if (std::abs(std::abs(a1.dot(a2)) - 1.0) < 1e-6) continue;
    const MeasurementFrame frame = frame_from_settings(a1, a2);
    CHECK(std::abs(frame.x_axis.v.norm() - 1.0) < 1e-12);
    CHECK(std::abs(frame.y_axis.v.norm() - 1.0) < 1e-12);
    CHECK(std::abs(frame.x_axis.dot(frame.y_axis)) < 1e-10);
  }
}

TEST_CASE("pauli string round trip and support") {
  const PauliString p = PauliString::from_string("IXYZ");
  CHECK(p.str() == "IXYZ");
  CHECK(p.qubit_count() == 4);
  CHECK(p.support() == std::vector<int>{1, 2, 3});
  CHECK(PauliString::identity(3).support().empty());
}
