#pragma once

// Indirect measurement processes (K, |xi>, U, M) on H (x) K.
//
// The coupling is the readout-time unitary U = U(T); no Hamiltonian or time
// parameter is modeled.

#include "qmeas/observables.hpp"

namespace qmeas {

class MeasurementProcess {
 public:
  /// Validates: coupling unitary within 1e-10 with side system_dim * ancilla_dim,
  /// ancilla_state and meter living on the ancilla.
  MeasurementProcess(Index system_dim, State ancilla_state, ComplexMatrix coupling,
                     Observable meter);

  Index system_dim() const { return system_dim_; }
  Index ancilla_dim() const { return ancilla_state_.dim(); }
  const State& ancilla_state() const { return ancilla_state_; }
  const ComplexMatrix& coupling() const { return coupling_; }
  const Observable& meter() const { return meter_; }

 private:
  Index system_dim_;
  State ancilla_state_;
  ComplexMatrix coupling_;
  Observable meter_;
};

/// Process with U = I: the meter never sees the system.
MeasurementProcess uncoupled_process(Index system_dim, State ancilla_state, Observable meter);

/// M(T) = U^dagger (I (x) M) U. The spectral family is obtained by conjugating
/// the meter's projectors, so the labels are exactly those of M.
Observable heisenberg_meter(const MeasurementProcess& mp);

/// P(x) = <psi xi| E_{M(T)}(x) |psi xi>.
OutcomeDistribution outcome_distribution(const MeasurementProcess& mp, const State& psi);

/// Pi(x) = <xi| E_{M(T)}(x) |xi>, a POVM on H.
Povm induced_povm(const MeasurementProcess& mp);

struct ReproducibilityCheck {
  bool reproduces;
  // max over the union of labels of ||Pi(x) - E_A(x)||_F; a label present on
  // one side only compares against the zero operator
  double max_frobenius_gap;
  std::vector<double> frobenius_gaps;  // per label of `a`, in spectral order
  bool labels_match;  // every nonzero effect has a partner label on the other side
};

/// Algebraic reproducibility test: the induced POVM equals the PVM of `a`.
ReproducibilityCheck probability_reproducibility(const MeasurementProcess& mp,
                                                 const Observable& a, double tol,
                                                 double label_tol = kLabelTol);

bool check_probability_reproducibility(const MeasurementProcess& mp, const Observable& a,
                                       double tol, double label_tol = kLabelTol);

/// Dilation realizing `p`: ancilla C^n, ready state |0>, meter diag(labels),
/// coupling extending psi (x) |0>  ->  sum_x (sqrt(Pi(x)) psi) (x) |x>.
/// Throws DomainError unless is_resolution_of_identity(p, 1e-9).
MeasurementProcess naimark_dilation(const Povm& p);

}  // namespace qmeas
