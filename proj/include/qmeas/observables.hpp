#pragma once

// Sharp observables (PVMs), generalized observables (POVMs) and Born statistics.

#include <optional>
#include <vector>

#include "qmeas/linalg.hpp"

namespace qmeas {

inline constexpr double kLabelTol = 1e-8;
inline constexpr double kProbabilitySumTol = 1e-10;
// Probabilities in [-kProbabilityClamp, 0) are rounded to 0; lower is an error.
inline constexpr double kProbabilityClamp = 1e-12;

struct Outcome {
  double label;
  double probability;
};

/// Discrete distribution over real outcome labels, in the order of the
/// generating spectral family / POVM.
class OutcomeDistribution {
 public:
  /// Clamps rounding noise per kProbabilityClamp and checks the total against
  /// kProbabilitySumTol. Throws NumericalError otherwise, DomainError for
  /// repeated labels.
  explicit OutcomeDistribution(std::vector<Outcome> entries);

  const std::vector<Outcome>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Outcome& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Probability of the label matching `x` within label_tol, 0 if absent.
  double probability_of(double x, double label_tol = kLabelTol) const;
  double total() const;

 private:
  std::vector<Outcome> entries_;
};

/// Clamp a raw quadratic form into [0, 1] per the rounding rule.
double clamp_probability(double p);

/// Largest |P(x) - Q(x)| over the union of labels (missing labels count as 0).
double max_pointwise_gap(const OutcomeDistribution& p, const OutcomeDistribution& q,
                         double label_tol = kLabelTol);

/// Hermitian operator together with its spectral family.
class Observable {
 public:
  /// Diagonalizes `op`; throws DomainError if it is not Hermitian, or if
  /// merging near-equal eigenvalues would break op = sum x E(x) at 1e-10.
  explicit Observable(ComplexMatrix op, double merge_tol = kMergeTol);

  /// Builds the operator as sum x E(x). Projectors must be Hermitian,
  /// idempotent, mutually orthogonal and resolve the identity within 1e-10.
  static Observable from_spectral(SpectralDecomposition spectral);

  /// diag(labels) on C^n; labels must be distinct.
  static Observable diagonal(const std::vector<double>& labels);

  const ComplexMatrix& op() const { return op_; }
  const SpectralDecomposition& spectral() const { return spectral_; }
  Index dim() const { return op_.rows(); }
  std::vector<double> labels() const;

 private:
  Observable(ComplexMatrix op, SpectralDecomposition spectral);

  ComplexMatrix op_;
  SpectralDecomposition spectral_;
};

struct Effect {
  double label;
  ComplexMatrix effect;
};

/// Labeled family of effects. Construction checks only structure (nonempty,
/// square, equal dims, finite, distinct labels); positivity and normalization
/// are checked by is_resolution_of_identity so that invalid families can be
/// represented and rejected explicitly.
class Povm {
 public:
  explicit Povm(std::vector<Effect> outcomes);

  /// PVM of a sharp observable.
  static Povm from_observable(const Observable& a);

  const std::vector<Effect>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  const Effect& operator[](std::size_t i) const { return outcomes_[i]; }
  auto begin() const { return outcomes_.begin(); }
  auto end() const { return outcomes_.end(); }
  Index dim() const { return outcomes_.front().effect.rows(); }

  /// Effect at the label matching `x` within label_tol, if any.
  const ComplexMatrix* find(double x, double label_tol = kLabelTol) const;

 private:
  std::vector<Effect> outcomes_;
};

OutcomeDistribution born_probabilities(const Observable& a, const State& psi);
OutcomeDistribution povm_probabilities(const Povm& p, const State& psi);

/// Sum of effects is I within tol (max-entry) and every effect is Hermitian
/// with spectrum in [-tol, 1 + tol].
bool is_resolution_of_identity(const Povm& p, double tol);

/// Every effect idempotent and distinct effects mutually orthogonal (max-entry,
/// within tol). Implies is_resolution_of_identity.
bool is_projective(const Povm& p, double tol);

}  // namespace qmeas
