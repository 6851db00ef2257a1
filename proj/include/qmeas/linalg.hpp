#pragma once

// Dense complex linear algebra kernel used by every other module.
//
// Operators are plain Eigen matrices. Composite spaces are ordered as
// H (x) K with the left factor as the slow index: basis |i>|a> sits at
// row i * dim(K) + a, matching tensor() below.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qmeas/errors.hpp"

namespace qmeas {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Index kProductDimGuard = 4096;
inline constexpr double kMergeTol = 1e-8;
inline constexpr double kStateNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

/// Unit vector in a finite-dimensional Hilbert space.
class State {
 public:
  /// Throws DomainError unless the vector is finite, nonempty and has unit norm
  /// within kStateNormTol.
  explicit State(ComplexVector amplitudes);

  /// Rescales `v` to unit norm; throws DomainError for zero or non-finite input.
  static State normalized(const ComplexVector& v);
  static State basis(Index dim, Index k);

  Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_[i]; }

 private:
  ComplexVector amplitudes_;
};

struct SpectralBranch {
  double eigenvalue;
  ComplexMatrix projector;
};

/// Spectral family {(x, E(x))} with strictly increasing outcome labels.
class SpectralDecomposition {
 public:
  SpectralDecomposition() = default;
  /// Checks shape and label ordering only; projector algebra is the caller's
  /// responsibility (see Observable).
  explicit SpectralDecomposition(std::vector<SpectralBranch> branches);

  const std::vector<SpectralBranch>& branches() const { return branches_; }
  std::size_t size() const { return branches_.size(); }
  const SpectralBranch& operator[](std::size_t i) const { return branches_[i]; }
  auto begin() const { return branches_.begin(); }
  auto end() const { return branches_.end(); }
  Index dim() const { return branches_.empty() ? 0 : branches_.front().projector.rows(); }

  // sum_x x E(x)
  ComplexMatrix reconstruct() const;

 private:
  std::vector<SpectralBranch> branches_;
};

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // nonincreasing, strictly positive
  std::vector<State> left_basis;
  std::vector<State> right_basis;
};

// ---------------------------------------------------------------------------
// Predicates and small helpers

ComplexMatrix identity(Index n);
bool all_finite(const ComplexMatrix& m);
/// max |a_ij - conj(a_ji)| <= tol * max(1, max |a_ij|)
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
/// max-entry test of U^dagger U = I
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
/// Principal square root of a positive semidefinite Hermitian matrix; eigenvalues
/// in [-1e-10, 0) are clamped to zero, anything more negative is a DomainError.
ComplexMatrix principal_sqrt(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Kernel operations

/// Kronecker product. Throws SizeError if either product dimension exceeds `guard`.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                     Index guard = kProductDimGuard);
State tensor(const State& a, const State& b, Index guard = kProductDimGuard);

/// Eigendecomposition of a Hermitian matrix with eigenvalues closer than
/// `merge_tol` (consecutive gaps, after sorting) merged into one branch. The
/// branch label is the mean of the merged eigenvalues.
SpectralDecomposition hermitian_eig(const ComplexMatrix& a, double merge_tol = kMergeTol);

/// Schmidt form of a bipartite state on C^dim1 (x) C^dim2. Terms with coefficient
/// below 1e-12 are dropped.
SchmidtDecomposition schmidt_decompose(const State& phi, Index dim1, Index dim2);

/// Extends a matrix with orthonormal columns to a square unitary whose leading
/// columns equal `v`. Missing columns come from Gram-Schmidt over the standard
/// basis e_0, e_1, ... in order, skipping candidates whose residual norm is at
/// most 1e-8.
ComplexMatrix complete_isometry_to_unitary(const ComplexMatrix& v);

// ---------------------------------------------------------------------------
// Seeded randomness
//
// The generator is std::mt19937_64 (bit-exact by the standard). Uniform doubles
// take the top 53 bits of one draw; Gaussians use Box-Muller with
// u1 = 1 - uniform, u2 = uniform, one draw pair per complex sample. No
// std::*_distribution is involved, so sequences replay across platforms.

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 mix of (seed, index); used for per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Normalized complex Gaussian vector (unitarily invariant distribution).
State random_state(Index dim, std::uint64_t seed);

}  // namespace qmeas
