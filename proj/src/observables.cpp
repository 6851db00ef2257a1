#include "qmeas/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmeas {

namespace {

constexpr double kReconstructionTol = 1e-10;

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// <psi| m |psi>, real part; m is Hermitian by construction at every call site.
double expectation(const ComplexMatrix& m, const ComplexVector& psi) {
  return psi.dot(m * psi).real();
}

void require_dim(Index expected, const State& psi, const char* what) {
  if (psi.dim() != expected) {
    throw DomainError(std::string(what) + ": state dimension " + std::to_string(psi.dim()) +
                      " does not match operator dimension " + std::to_string(expected));
  }
}

}  // namespace

double clamp_probability(double p) {
  if (!std::isfinite(p) || p < -kProbabilityClamp || p > 1.0 + kProbabilityClamp) {
    throw NumericalError("probability " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

OutcomeDistribution::OutcomeDistribution(std::vector<Outcome> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i].probability = clamp_probability(entries_[i].probability);
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[i].label == entries_[j].label) {
        throw DomainError("outcome distribution: repeated label");
      }
    }
  }
  if (std::abs(total() - 1.0) > kProbabilitySumTol) {
    throw NumericalError("outcome distribution: total " + std::to_string(total()) + " != 1");
  }
}

double OutcomeDistribution::probability_of(double x, double label_tol) const {
  for (const auto& e : entries_) {
    if (std::abs(e.label - x) <= label_tol) return e.probability;
  }
  return 0.0;
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.probability;
  return sum;
}

double max_pointwise_gap(const OutcomeDistribution& p, const OutcomeDistribution& q,
                         double label_tol) {
  double gap = 0.0;
  for (const auto& e : p) gap = std::max(gap, std::abs(e.probability - q.probability_of(e.label, label_tol)));
  for (const auto& e : q) gap = std::max(gap, std::abs(e.probability - p.probability_of(e.label, label_tol)));
  return gap;
}

// ---------------------------------------------------------------------------

Observable::Observable(ComplexMatrix op, SpectralDecomposition spectral)
    : op_(std::move(op)), spectral_(std::move(spectral)) {}

Observable::Observable(ComplexMatrix op, double merge_tol) {
  spectral_ = hermitian_eig(op, merge_tol);
  op_ = 0.5 * (op + op.adjoint());
  const double scale = std::max(1.0, max_abs(op_));
  if (frobenius_distance(spectral_.reconstruct(), op_) > kReconstructionTol * scale) {
    throw DomainError(
        "observable: eigenvalues closer than the merge tolerance are not degenerate");
  }
}

Observable Observable::from_spectral(SpectralDecomposition spectral) {
  const Index n = spectral.dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < spectral.size(); ++i) {
    const ComplexMatrix& e = spectral[i].projector;
    if (!is_hermitian(e, kReconstructionTol) || max_abs(e * e - e) > kReconstructionTol) {
      throw DomainError("observable: branch " + std::to_string(i) + " is not a projector");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (max_abs(e * spectral[j].projector) > kReconstructionTol) {
        throw DomainError("observable: projectors are not mutually orthogonal");
      }
    }
    sum += e;
  }
  if (max_abs(sum - identity(n)) > kReconstructionTol) {
    throw DomainError("observable: projectors do not sum to identity");
  }
  ComplexMatrix op = spectral.reconstruct();
  op = 0.5 * (op + op.adjoint());
  return Observable(std::move(op), std::move(spectral));
}

Observable Observable::diagonal(const std::vector<double>& labels) {
  if (labels.empty()) throw DomainError("observable: no labels");
  const Index n = static_cast<Index>(labels.size());
  std::vector<Index> order(labels.size());
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return labels[a] < labels[b]; });
  std::vector<SpectralBranch> branches;
  for (Index i : order) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, i) = 1.0;
    branches.push_back({labels[i], std::move(e)});
  }
  return from_spectral(SpectralDecomposition(std::move(branches)));
}

std::vector<double> Observable::labels() const {
  std::vector<double> out;
  for (const auto& b : spectral_) out.push_back(b.eigenvalue);
  return out;
}

// ---------------------------------------------------------------------------

Povm::Povm(std::vector<Effect> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw DomainError("povm: no outcomes");
  const Index n = outcomes_.front().effect.rows();
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    const auto& o = outcomes_[i];
    if (n == 0 || o.effect.rows() != n || o.effect.cols() != n) {
      throw DomainError("povm: effects must be square with a common dimension");
    }
    if (!o.effect.allFinite() || !std::isfinite(o.label)) {
      throw DomainError("povm: non-finite entry");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (outcomes_[j].label == o.label) throw DomainError("povm: repeated outcome label");
    }
  }
}

Povm Povm::from_observable(const Observable& a) {
  std::vector<Effect> outcomes;
  for (const auto& b : a.spectral()) outcomes.push_back({b.eigenvalue, b.projector});
  return Povm(std::move(outcomes));
}

const ComplexMatrix* Povm::find(double x, double label_tol) const {
  for (const auto& o : outcomes_) {
    if (std::abs(o.label - x) <= label_tol) return &o.effect;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------

OutcomeDistribution born_probabilities(const Observable& a, const State& psi) {
  return povm_probabilities(Povm::from_observable(a), psi);
}

OutcomeDistribution povm_probabilities(const Povm& p, const State& psi) {
  require_dim(p.dim(), psi, "povm_probabilities");
  std::vector<Outcome> entries;
  entries.reserve(p.size());
  for (const auto& o : p) entries.push_back({o.label, expectation(o.effect, psi.amplitudes())});
  return OutcomeDistribution(std::move(entries));
}

bool is_resolution_of_identity(const Povm& p, double tol) {
  const Index n = p.dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& o : p) {
    if (!is_hermitian(o.effect, tol)) return false;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (o.effect + o.effect.adjoint()),
                                                        Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (ev.minCoeff() < -tol || ev.maxCoeff() > 1.0 + tol) return false;
    sum += o.effect;
  }
  return max_abs(sum - identity(n)) <= tol;
}

bool is_projective(const Povm& p, double tol) {
  if (!is_resolution_of_identity(p, tol)) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const ComplexMatrix& e = p[i].effect;
    if (max_abs(e * e - e) > tol) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (max_abs(e * p[j].effect) > tol) return false;
    }
  }
  return true;
}

}  // namespace qmeas
