#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qmeas/linalg.hpp"

using namespace qmeas;
using namespace qmeas::testing;

namespace {

// Kronecker product straight from the index formula.
ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("tensor: identity and diagonal blocks") {
  CHECK(tensor(identity(2), identity(2)) == identity(4));
  CHECK(tensor(diag({1, 2}), identity(2)) == diag({1, 1, 2, 2}));
}

TEST_CASE("tensor: matches index oracle, associative and bilinear") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix a = random_matrix(2, 2, 3 * s);
    const ComplexMatrix b = random_matrix(2, 3, 3 * s + 1);
    const ComplexMatrix c = random_matrix(3, 2, 3 * s + 2);
    CHECK(max_abs(tensor(a, b) - kron_oracle(a, b)) == 0.0);
    CHECK(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) < 1e-14);
    const Complex alpha(0.3, -1.7);
    CHECK(max_abs(tensor(alpha * a + c.topRows(2), b) -
                  (alpha * tensor(a, b) + tensor(c.topRows(2), b))) < 1e-14);
  }
}

TEST_CASE("tensor: product-dimension guard") {
  CHECK_THROWS_AS(tensor(identity(65), identity(64)), SizeError);
  CHECK_NOTHROW(tensor(identity(64), identity(64)));
  CHECK_THROWS_AS(tensor(identity(3), identity(3), 8), SizeError);
}

TEST_CASE("hermitian_eig: Pauli-Z and identity") {
  const auto z = hermitian_eig(pauli_z());
  REQUIRE(z.size() == 2);
  CHECK(z[0].eigenvalue == doctest::Approx(-1.0));
  CHECK(z[1].eigenvalue == doctest::Approx(1.0));
  CHECK(max_abs(z[0].projector - diag({0, 1})) < 1e-14);
  CHECK(max_abs(z[1].projector - diag({1, 0})) < 1e-14);

  const auto id = hermitian_eig(identity(3));
  REQUIRE(id.size() == 1);
  CHECK(id[0].eigenvalue == doctest::Approx(1.0));
  CHECK(max_abs(id[0].projector - identity(3)) < 1e-14);
}

TEST_CASE("hermitian_eig: random Hermitian reconstructs and resolves identity") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const ComplexMatrix a = random_hermitian(4, 100 + s);
    const auto sd = hermitian_eig(a);
    CHECK((sd.reconstruct() - a).norm() < 1e-10);
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    for (std::size_t i = 0; i < sd.size(); ++i) {
      sum += sd[i].projector;
      CHECK(max_abs(sd[i].projector * sd[i].projector - sd[i].projector) < 1e-10);
      for (std::size_t j = 0; j < i; ++j) {
        CHECK(max_abs(sd[i].projector * sd[j].projector) < 1e-10);
        CHECK(sd[i].eigenvalue - sd[j].eigenvalue > kMergeTol);
      }
    }
    CHECK(max_abs(sum - identity(4)) < 1e-10);
  }
}

TEST_CASE("hermitian_eig: degenerate spectrum in a rotated basis merges") {
  const ComplexMatrix u = random_isometry(4, 4, 9);
  const ComplexMatrix a = u * diag({2, 2, -1, 5}) * u.adjoint();
  const auto sd = hermitian_eig(a);
  REQUIRE(sd.size() == 3);
  CHECK(sd[1].eigenvalue == doctest::Approx(2.0));
  CHECK(sd[1].projector.trace().real() == doctest::Approx(2.0));
}

TEST_CASE("hermitian_eig: rejects non-Hermitian and non-square") {
  ComplexMatrix m = pauli_z();
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(hermitian_eig(m), DomainError);
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::Zero(2, 3)), DomainError);
  ComplexMatrix nan = identity(2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(hermitian_eig(nan), DomainError);
}

TEST_CASE("schmidt_decompose: Bell, product and random states") {
  const State bell = ket({kInvSqrt2, 0, 0, kInvSqrt2});
  const auto sb = schmidt_decompose(bell, 2, 2);
  REQUIRE(sb.coefficients.size() == 2);
  CHECK(sb.coefficients[0] == doctest::Approx(kInvSqrt2).epsilon(1e-12));
  CHECK(sb.coefficients[1] == doctest::Approx(kInvSqrt2).epsilon(1e-12));

  const State product = tensor(State::basis(2, 0), ket({1, 1}));
  const auto sp = schmidt_decompose(product, 2, 2);
  REQUIRE(sp.coefficients.size() == 1);
  CHECK(sp.coefficients[0] == doctest::Approx(1.0));

  for (std::uint64_t s = 0; s < 20; ++s) {
    const State phi = random_state(6, 500 + s);
    const auto sd = schmidt_decompose(phi, 2, 3);
    ComplexVector rebuilt = ComplexVector::Zero(6);
    double squares = 0.0;
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k) {
      if (k > 0) CHECK(sd.coefficients[k] <= sd.coefficients[k - 1]);
      squares += sd.coefficients[k] * sd.coefficients[k];
      rebuilt += sd.coefficients[k] * tensor(sd.left_basis[k], sd.right_basis[k]).amplitudes();
      for (std::size_t l = 0; l < sd.coefficients.size(); ++l) {
        const double expected = k == l ? 1.0 : 0.0;
        CHECK(std::abs(sd.left_basis[k].amplitudes().dot(sd.left_basis[l].amplitudes()) - expected) < 1e-10);
        CHECK(std::abs(sd.right_basis[k].amplitudes().dot(sd.right_basis[l].amplitudes()) - expected) < 1e-10);
      }
    }
    CHECK(std::abs(squares - 1.0) < 1e-12);
    CHECK((rebuilt - phi.amplitudes()).norm() < 1e-10);
  }
  CHECK_THROWS_AS(schmidt_decompose(bell, 2, 3), DomainError);
}

TEST_CASE("complete_isometry_to_unitary") {
  const ComplexMatrix e0 = identity(2).leftCols(1);
  const ComplexMatrix u2 = complete_isometry_to_unitary(e0);
  CHECK(is_unitary(u2));
  CHECK(u2(0, 0) == Complex(1.0));
  CHECK(u2(1, 0) == Complex(0.0));

  CHECK(complete_isometry_to_unitary(identity(4)) == identity(4));

  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix v = random_isometry(6, 2, 40 + s);
    const ComplexMatrix u = complete_isometry_to_unitary(v);
    CHECK(max_abs(u.adjoint() * u - identity(6)) < 1e-10);
    CHECK(max_abs(u.leftCols(2) - v) == 0.0);
  }

  ComplexMatrix bad = ComplexMatrix::Ones(3, 2);
  CHECK_THROWS_AS(complete_isometry_to_unitary(bad), DomainError);
  CHECK_THROWS_AS(complete_isometry_to_unitary(identity(3).leftCols(2).transpose()), DomainError);
}

TEST_CASE("random_state: seeded, normalized, unitarily invariant first moment") {
  const State a = random_state(4, 7);
  const State b = random_state(4, 7);
  CHECK(a.amplitudes() == b.amplitudes());
  CHECK(random_state(4, 8).amplitudes() != a.amplitudes());

  double mean = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) {
    const State psi = random_state(2, static_cast<std::uint64_t>(s));
    CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);
    mean += std::norm(psi[0]);
  }
  mean /= samples;
  // |a0|^2 is uniform on [0,1] at dim 2: standard error 0.29 / sqrt(1e4) = 0.003.
  CHECK(std::abs(mean - 0.5) < 0.02);
}

TEST_CASE("State: invariants") {
  CHECK_THROWS_AS(State(ComplexVector::Ones(2)), DomainError);
  CHECK_THROWS_AS(State::normalized(ComplexVector::Zero(3)), DomainError);
  CHECK_THROWS_AS(State::basis(2, 2), DomainError);
  CHECK_NOTHROW(State(ComplexVector::Unit(3, 1)));
}

TEST_CASE("principal_sqrt clamps rounding and rejects negative spectra") {
  const ComplexMatrix a = random_hermitian(3, 77);
  const ComplexMatrix psd = a * a;
  const ComplexMatrix root = principal_sqrt(psd);
  CHECK(max_abs(root * root - psd) < 1e-12 * std::max(1.0, max_abs(psd)));
  CHECK_NOTHROW(principal_sqrt(diag({1.0, -1e-13})));
  CHECK_THROWS_AS(principal_sqrt(diag({1.0, -0.1})), DomainError);
}
