#include "qmeas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qmeas {

namespace {

constexpr double kIsometryTol = 1e-10;
constexpr double kCompletionSkip = 1e-8;
constexpr double kSchmidtCutoff = 1e-12;
constexpr double kPsdClamp = 1e-10;

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace

// ---------------------------------------------------------------------------

State::State(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw DomainError("state: empty amplitude vector");
  }
  if (!amplitudes_.allFinite()) {
    throw DomainError("state: non-finite amplitude");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kStateNormTol) {
    throw DomainError("state: norm " + std::to_string(norm) + " is not 1");
  }
}

State State::normalized(const ComplexVector& v) {
  if (v.size() == 0 || !v.allFinite()) {
    throw DomainError("state: cannot normalize empty or non-finite vector");
  }
  const double norm = v.norm();
  if (norm == 0.0) {
    throw DomainError("state: cannot normalize zero vector");
  }
  return State(v / norm);
}

State State::basis(Index dim, Index k) {
  if (dim < 1 || k < 0 || k >= dim) {
    throw DomainError("state: basis index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v[k] = 1.0;
  return State(std::move(v));
}

SpectralDecomposition::SpectralDecomposition(std::vector<SpectralBranch> branches)
    : branches_(std::move(branches)) {
  if (branches_.empty()) {
    throw DomainError("spectral decomposition: no branches");
  }
  const Index n = branches_.front().projector.rows();
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& b = branches_[i];
    if (b.projector.rows() != n || b.projector.cols() != n || n == 0) {
      throw DomainError("spectral decomposition: projector shape mismatch");
    }
    if (!std::isfinite(b.eigenvalue)) {
      throw DomainError("spectral decomposition: non-finite eigenvalue");
    }
    if (i > 0 && !(b.eigenvalue > branches_[i - 1].eigenvalue)) {
      throw DomainError("spectral decomposition: eigenvalues not strictly increasing");
    }
  }
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (const auto& b : branches_) out += b.eigenvalue * b.projector;
  return out;
}

// ---------------------------------------------------------------------------

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  const double scale = std::max(1.0, max_abs(m));
  return max_abs(m - m.adjoint()) <= tol * scale;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  return max_abs(m.adjoint() * m - identity(m.rows())) <= tol;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DomainError("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DomainError("commutator: operands must be square of equal size");
  }
  return a * b - b * a;
}

ComplexMatrix principal_sqrt(const ComplexMatrix& m) {
  if (!is_hermitian(m, 1e-10)) {
    throw DomainError("principal_sqrt: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  Eigen::VectorXd evals = solver.eigenvalues();
  for (Index i = 0; i < evals.size(); ++i) {
    if (evals[i] < -kPsdClamp) {
      throw DomainError("principal_sqrt: matrix is not positive semidefinite");
    }
    evals[i] = std::sqrt(std::max(evals[i], 0.0));
  }
  const ComplexMatrix& v = solver.eigenvectors();
  return hermitian_part(v * evals.cast<Complex>().asDiagonal() * v.adjoint());
}

// ---------------------------------------------------------------------------

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, Index guard) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > guard || cols > guard) {
    throw SizeError("tensor: product dimension " + std::to_string(std::max(rows, cols)) +
                    " exceeds guard " + std::to_string(guard));
  }
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

State tensor(const State& a, const State& b, Index guard) {
  ComplexVector v = tensor(ComplexMatrix(a.amplitudes()), ComplexMatrix(b.amplitudes()), guard);
  return State::normalized(v);
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& a, double merge_tol) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DomainError("hermitian_eig: matrix must be square and nonempty");
  }
  if (!a.allFinite()) {
    throw DomainError("hermitian_eig: non-finite entry");
  }
  if (!is_hermitian(a)) {
    throw DomainError("hermitian_eig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: eigensolver did not converge");
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const ComplexMatrix& evecs = solver.eigenvectors();

  std::vector<SpectralBranch> branches;
  Index start = 0;
  const Index n = evals.size();
  for (Index i = 1; i <= n; ++i) {
    if (i < n && evals[i] - evals[i - 1] <= merge_tol) continue;
    const Index count = i - start;
    const auto block = evecs.middleCols(start, count);
    branches.push_back({evals.segment(start, count).mean(),
                        hermitian_part(block * block.adjoint())});
    start = i;
  }
  return SpectralDecomposition(std::move(branches));
}

SchmidtDecomposition schmidt_decompose(const State& phi, Index dim1, Index dim2) {
  if (dim1 < 1 || dim2 < 1 || phi.dim() != dim1 * dim2) {
    throw DomainError("schmidt_decompose: state dimension " + std::to_string(phi.dim()) +
                      " != " + std::to_string(dim1) + " x " + std::to_string(dim2));
  }
  // coefficient matrix C(i, j) = <i j | phi>
  ComplexMatrix c(dim1, dim2);
  for (Index i = 0; i < dim1; ++i) {
    for (Index j = 0; j < dim2; ++j) c(i, j) = phi[i * dim2 + j];
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();  // nonincreasing

  // phi = sum_k s_k u_k (x) conj(v_k)
  SchmidtDecomposition out;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv[k] <= kSchmidtCutoff) break;
    out.coefficients.push_back(sv[k]);
    out.left_basis.push_back(State::normalized(svd.matrixU().col(k)));
    out.right_basis.push_back(State::normalized(svd.matrixV().col(k).conjugate()));
  }
  return out;
}

ComplexMatrix complete_isometry_to_unitary(const ComplexMatrix& v) {
  const Index n = v.rows();
  const Index k = v.cols();
  if (n == 0 || k > n) {
    throw DomainError("complete_isometry_to_unitary: need rows >= cols > 0");
  }
  if (!v.allFinite() || max_abs(v.adjoint() * v - identity(k)) > kIsometryTol) {
    throw DomainError("complete_isometry_to_unitary: columns are not orthonormal");
  }
  ComplexMatrix u(n, n);
  u.leftCols(k) = v;
  Index filled = k;
  for (Index e = 0; e < n && filled < n; ++e) {
    ComplexVector w = ComplexVector::Unit(n, e);
    // Two projection passes keep the new column orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      const auto q = u.leftCols(filled);
      w -= q * (q.adjoint() * w);
    }
    const double norm = w.norm();
    if (norm <= kCompletionSkip) continue;
    u.col(filled++) = w / norm;
  }
  if (filled != n) {
    throw NumericalError("complete_isometry_to_unitary: basis completion failed");
  }
  return u;
}

// ---------------------------------------------------------------------------

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Complex SeededRng::complex_normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));  // variance 1/2 per component
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

State random_state(Index dim, std::uint64_t seed) {
  if (dim < 1) throw DomainError("random_state: dim must be positive");
  SeededRng rng(seed);
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = rng.complex_normal();
  return State::normalized(v);
}

}  // namespace qmeas
