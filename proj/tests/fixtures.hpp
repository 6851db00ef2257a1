#pragma once

// Shared test fixtures: named matrices and seeded random generators that do
// not go through the code paths under test.

#include <cmath>
#include <cstdint>
#include <vector>

#include "qmeas/linalg.hpp"
#include "qmeas/observables.hpp"

namespace qmeas::testing {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline ComplexMatrix diag(const std::vector<double>& d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
  return m;
}

inline State ket(std::vector<Complex> amps) {
  ComplexVector v(static_cast<Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v[static_cast<Index>(i)] = amps[i];
  return State::normalized(v);
}

inline ComplexMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  SeededRng rng(seed);
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  }
  return m;
}

inline ComplexMatrix random_hermitian(Index dim, std::uint64_t seed) {
  const ComplexMatrix g = random_matrix(dim, dim, seed);
  return 0.5 * (g + g.adjoint());
}

// Isometry from the Q factor of a Gaussian matrix.
inline ComplexMatrix random_isometry(Index rows, Index cols, std::uint64_t seed) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rows, cols, seed));
  return qr.householderQ() * ComplexMatrix::Identity(rows, cols);
}

// Inverse square root of a positive definite matrix via Eigen's solver directly.
inline ComplexMatrix inverse_sqrt(const ComplexMatrix& s) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  Eigen::VectorXd inv = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

// Pi(x) = S^{-1/2} G_x^dagger G_x S^{-1/2}, labels 0..n-1.
inline Povm random_povm(Index dim, Index outcomes, std::uint64_t seed) {
  std::vector<ComplexMatrix> raw;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (Index x = 0; x < outcomes; ++x) {
    const ComplexMatrix g = random_matrix(dim, dim, derive_seed(seed, static_cast<std::uint64_t>(x)));
    raw.push_back(g.adjoint() * g);
    sum += raw.back();
  }
  const ComplexMatrix w = inverse_sqrt(sum);
  std::vector<Effect> effects;
  for (Index x = 0; x < outcomes; ++x) {
    ComplexMatrix e = w * raw[static_cast<std::size_t>(x)] * w;
    effects.push_back({static_cast<double>(x), 0.5 * (e + e.adjoint())});
  }
  return Povm(std::move(effects));
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qmeas::testing
