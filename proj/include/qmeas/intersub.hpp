#pragma once

// Two observers measuring one system through their own ancillas:
// H (x) K1 (x) K2, joint statistics of the evolved meters, and the
// intersubjectivity check (same outcome with probability 1).

#include <cstdint>
#include <optional>
#include <vector>

#include "qmeas/vonneumann.hpp"

namespace qmeas {

inline constexpr double kOitTol = 1e-9;
inline constexpr double kLocalityTol = 1e-9;

enum class CompositionOrder {
  kFirstThenSecond,  // U = lift(U2) lift(U1)
  kSecondThenFirst,  // U = lift(U1) lift(U2)
};

class JointScenario {
 public:
  Index system_dim() const { return process1_.system_dim(); }
  const MeasurementProcess& process1() const { return process1_; }
  const MeasurementProcess& process2() const { return process2_; }
  const ComplexMatrix& composite_coupling() const { return composite_coupling_; }
  const Observable& evolved_meter1() const { return evolved_meter1_; }
  const Observable& evolved_meter2() const { return evolved_meter2_; }
  double commutator_norm() const { return commutator_norm_; }
  /// |psi> (x) |xi1> (x) |xi2>
  State initial_state(const State& psi) const;

 private:
  friend JointScenario compose_joint_scenario(const MeasurementProcess&,
                                              const MeasurementProcess&, CompositionOrder);
  JointScenario(MeasurementProcess p1, MeasurementProcess p2, ComplexMatrix coupling,
                Observable m1, Observable m2, double commutator_norm);

  MeasurementProcess process1_;
  MeasurementProcess process2_;
  ComplexMatrix composite_coupling_;
  Observable evolved_meter1_;
  Observable evolved_meter2_;
  double commutator_norm_;
};

/// ||[m1, m2]||_F; throws LocalityError when it exceeds tol.
double check_locality(const Observable& m1, const Observable& m2, double tol = kLocalityTol);

/// Lifts each coupling to H (x) K1 (x) K2 (identity on the other ancilla),
/// multiplies them in the given order and evolves both lifted meters.
JointScenario compose_joint_scenario(const MeasurementProcess& p1, const MeasurementProcess& p2,
                                     CompositionOrder order = CompositionOrder::kFirstThenSecond);

struct JointOutcome {
  double x;  // observer 1
  double y;  // observer 2
  double probability;
};

class JointDistribution {
 public:
  /// Clamps rounding noise and checks the total against kProbabilitySumTol.
  explicit JointDistribution(std::vector<JointOutcome> entries);

  const std::vector<JointOutcome>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  double probability_of(double x, double y, double label_tol = kLabelTol) const;
  OutcomeDistribution first_marginal() const;
  OutcomeDistribution second_marginal() const;

 private:
  std::vector<JointOutcome> entries_;
};

/// P(x, y) = <psi xi1 xi2| E_{M1(T)}(x) E_{M2(T)}(y) |psi xi1 xi2>.
JointDistribution joint_distribution(const JointScenario& s, const State& psi);

/// Largest |P(x, y) - Q(x, y)| over both label sets.
double max_joint_gap(const JointDistribution& p, const JointDistribution& q,
                     double label_tol = kLabelTol);

struct IntersubjectivityReport {
  double off_diagonal_mass = 0.0;
  std::vector<Outcome> diagonal;  // matched label -> P(x, x)
  bool passes = false;            // off_diagonal_mass <= tolerance_used
  double tolerance_used = 0.0;
  // Filled when a target sharp observable is supplied: max_x |P(x, x) - ||E(x) psi||^2|
  std::optional<double> max_diagonal_gap;
  std::optional<bool> diagonal_matches_born;
};

IntersubjectivityReport check_intersubjectivity(const JointScenario& s, const State& psi,
                                                double tol = kOitTol,
                                                double label_tol = kLabelTol,
                                                const Observable* target = nullptr);

struct OitSummary {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double max_off_diagonal_mass = 0.0;
  double max_diagonal_gap = 0.0;
  double commutator_norm = 0.0;
  double reproducibility_gap1 = 0.0;  // von Neumann process
  double reproducibility_gap2 = 0.0;  // Naimark dilation of the PVM
  bool passes = false;
};

/// Two-observer run for sharp observable `a`: observer 1 uses build_vn_process(a),
/// observer 2 the Naimark dilation of a's PVM. Trial t draws
/// random_state(dim, derive_seed(seed, t)). Throws ConsistencyError if either
/// process fails reproducibility at 1e-9.
OitSummary verify_oit(const Observable& a, std::size_t trials, std::uint64_t seed,
                      double tol = kOitTol, double label_tol = kLabelTol);

struct Counterexample {
  Povm povm;
  JointScenario scenario;
};

/// Qubit POVM {0: I/2, 1: I/2} realized twice by Hadamard-coin processes that
/// never touch the system; each reproduces the POVM yet the observers disagree
/// with probability 1/2.
Counterexample counterexample_uninformative_povm();

struct JointCount {
  double x;
  double y;
  std::size_t count;
};

/// n i.i.d. draws from joint_distribution(s, psi) by inverse CDF over the entry
/// order using SeededRng(seed). Only pairs drawn at least once are returned.
std::vector<JointCount> sample_outcomes(const JointScenario& s, const State& psi,
                                        std::size_t n, std::uint64_t seed);

}  // namespace qmeas
