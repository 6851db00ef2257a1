#include <doctest.h>

#include "fixtures.hpp"
#include "qmeas/observables.hpp"

using namespace qmeas;
using namespace qmeas::testing;

TEST_CASE("born_probabilities: Pauli-Z eigenstate and equal superposition") {
  const Observable z(pauli_z());
  const auto p0 = born_probabilities(z, State::basis(2, 0));
  CHECK(p0.probability_of(1.0) == doctest::Approx(1.0));
  CHECK(p0.probability_of(-1.0) == 0.0);

  const auto plus = born_probabilities(z, ket({1, 1}));
  CHECK(plus.probability_of(1.0) == doctest::Approx(0.5));
  CHECK(plus.probability_of(-1.0) == doctest::Approx(0.5));
}

TEST_CASE("born_probabilities: diag(1,2,3) against |<k|psi>|^2") {
  const Observable a(diag({1, 2, 3}));
  const State psi = ket({0.6, Complex(0, 0.8), 0});
  const auto p = born_probabilities(a, psi);
  for (Index k = 0; k < 3; ++k) {
    CHECK(std::abs(p.probability_of(k + 1.0) - std::norm(psi[k])) < 1e-15);
  }
  CHECK(p.probability_of(1.0) == doctest::Approx(0.36));
  CHECK(p.probability_of(2.0) == doctest::Approx(0.64));
  CHECK(p.probability_of(3.0) == 0.0);
  CHECK_THROWS_AS(born_probabilities(a, State::basis(2, 0)), DomainError);
}

TEST_CASE("povm_probabilities: coin, biased effects, PVM agreement") {
  const Povm coin({{0.0, 0.5 * identity(2)}, {1.0, 0.5 * identity(2)}});
  const auto pc = povm_probabilities(coin, random_state(2, 1));
  CHECK(pc.probability_of(0.0) == doctest::Approx(0.5));
  CHECK(pc.probability_of(1.0) == doctest::Approx(0.5));

  const Povm biased({{0.0, diag({0.75, 0.25})}, {1.0, diag({0.25, 0.75})}});
  const auto pb = povm_probabilities(biased, State::basis(2, 0));
  CHECK(pb.probability_of(0.0) == doctest::Approx(0.75));
  CHECK(pb.probability_of(1.0) == doctest::Approx(0.25));

  for (std::uint64_t s = 0; s < 50; ++s) {
    const Observable a(random_hermitian(3, 900 + s));
    const State psi = random_state(3, 1900 + s);
    const auto born = born_probabilities(a, psi);
    const auto povm = povm_probabilities(Povm::from_observable(a), psi);
    CHECK(max_pointwise_gap(born, povm) < 1e-12);
    CHECK(std::abs(born.total() - 1.0) < 1e-10);
  }
}

TEST_CASE("is_resolution_of_identity") {
  CHECK(is_resolution_of_identity(Povm({{0, diag({1, 0})}, {1, diag({0, 1})}}), 1e-10));
  CHECK_FALSE(is_resolution_of_identity(Povm({{0, 0.5 * identity(2)}, {1, identity(2) / 3.0}}), 1e-10));
  // I/2 +- 0.6 X sums to I but each effect has eigenvalues 1.1 and -0.1.
  const Povm overshoot({{0, 0.5 * identity(2) + 0.6 * pauli_x()},
                        {1, 0.5 * identity(2) - 0.6 * pauli_x()}});
  CHECK_FALSE(is_resolution_of_identity(overshoot, 1e-10));
  for (std::uint64_t s = 0; s < 10; ++s) {
    CHECK(is_resolution_of_identity(random_povm(3, 4, s), 1e-10));
  }
}

TEST_CASE("is_projective") {
  CHECK(is_projective(Povm::from_observable(Observable(pauli_z())), 1e-10));
  CHECK_FALSE(is_projective(Povm({{0, 0.5 * identity(2)}, {1, 0.5 * identity(2)}}), 1e-10));
  // projective implies resolution of identity
  const Povm not_complete({{0, diag({1, 0})}});
  CHECK_FALSE(is_projective(not_complete, 1e-10));
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Povm p = random_povm(2, 3, 70 + s);
    if (is_projective(p, 1e-9)) CHECK(is_resolution_of_identity(p, 1e-9));
  }
}

TEST_CASE("Observable: invariants and constructors") {
  const Observable a(random_hermitian(4, 3));
  CHECK((a.spectral().reconstruct() - a.op()).norm() < 1e-10);
  CHECK_THROWS_AS(Observable(ComplexMatrix::Ones(2, 3)), DomainError);
  ComplexMatrix skew = pauli_x();
  skew(0, 1) = Complex(0, 1);
  CHECK_THROWS_AS(Observable{skew}, DomainError);
  // eigenvalues 1e-9 apart fall inside the merge tolerance but are not degenerate
  CHECK_THROWS_AS(Observable(diag({1.0, 1.0 + 5e-9})), DomainError);

  const Observable d = Observable::diagonal({3.0, -1.0});
  CHECK(d.labels() == std::vector<double>{-1.0, 3.0});
  CHECK(d.op() == diag({3.0, -1.0}));
  CHECK_THROWS_AS(Observable::diagonal({1.0, 1.0}), DomainError);
}

TEST_CASE("Povm and OutcomeDistribution: structural checks") {
  CHECK_THROWS_AS(Povm({}), DomainError);
  CHECK_THROWS_AS(Povm({{0, identity(2)}, {0, identity(2)}}), DomainError);
  CHECK_THROWS_AS(Povm({{0, identity(2)}, {1, identity(3)}}), DomainError);

  CHECK(OutcomeDistribution({{0, 1.0 + 5e-13}, {1, -5e-13}})[1].probability == 0.0);
  CHECK_THROWS_AS(OutcomeDistribution({{0, 1.1}, {1, -0.1}}), NumericalError);
  CHECK_THROWS_AS(OutcomeDistribution({{0, 0.5}, {1, 0.4}}), NumericalError);
  // a non-positive "effect" surfaces as a numerical-consistency error
  const Povm overshoot({{0, 0.5 * identity(2) + 0.6 * pauli_x()},
                        {1, 0.5 * identity(2) - 0.6 * pauli_x()}});
  CHECK_THROWS_AS(povm_probabilities(overshoot, ket({1, 1})), NumericalError);
}
