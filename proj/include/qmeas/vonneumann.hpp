#pragma once

// Von Neumann's entangling measurement and observable entanglement
// (A1A2-entanglement) of two compatible observables in a bipartite state.

#include <array>
#include <utility>
#include <vector>

#include "qmeas/measproc.hpp"

namespace qmeas {

enum class EntanglementCondition : std::size_t {
  kOffPairingVanishes = 0,   // P(a1k, a2m) = 0 for m != sigma(k)
  kPairedMassIsOne,          // sum_k P(a1k, a2sigma(k)) = 1
  kFirstMarginalMatches,     // P(A1 = a1k) = P(a1k, a2sigma(k))
  kSecondMarginalMatches,    // P(A2 = a2sigma(k)) = P(a1k, a2sigma(k))
  kConditionalsAreOne,       // both Bayes conditionals equal 1 on nonzero pairs
};
inline constexpr std::size_t kEntanglementConditionCount = 5;

const char* condition_name(EntanglementCondition c);

struct EntanglementReport {
  // pairing[i] = (branch of A1, branch of A2); min(n1, n2) pairs, injective on
  // both sides. Unpaired branches must carry zero probability.
  std::vector<std::pair<std::size_t, std::size_t>> pairing;
  std::array<bool, kEntanglementConditionCount> condition_results{};
  std::array<double, kEntanglementConditionCount> violations{};
  bool is_entangled = false;
  double max_violation = 0.0;
  // sum of joint probabilities outside the pairing
  double off_pairing_mass = 0.0;
  // joint[k][m] = <Phi| E1(a1k) (x) E2(a2m) |Phi>
  std::vector<std::vector<double>> joint;
  std::vector<double> labels1;
  std::vector<double> labels2;

  bool holds(EntanglementCondition c) const {
    return condition_results[static_cast<std::size_t>(c)];
  }
};

/// Controlled cyclic shift U = sum_k E_A(x_k) (x) S^k on H (x) C^n, ready state
/// |0>, meter diag(x_0, ..., x_{n-1}) with x_k ascending. Branch k drives the
/// pointer to |k>.
MeasurementProcess build_vn_process(const Observable& a);

/// Phi = U (psi (x) |0>) = sum_k (E_A(x_k) psi) (x) |k>.
State entangled_state(const State& psi, const Observable& a);

/// Joint distribution of A1 (x) I and I (x) A2 in phi, the best pairing (max
/// paired mass; exhaustive up to 6 branches, greedy above) and the five
/// entanglement conditions evaluated at `tol`.
EntanglementReport check_observable_entanglement(const Observable& a1, const Observable& a2,
                                                 const State& phi, double tol);

/// Observables diagonal in the completed Schmidt bases of phi, with
/// eigenvalues 1, 2, ... on each side.
std::pair<Observable, Observable> find_entangled_observables(const State& phi, Index dim1,
                                                             Index dim2);

/// Off-pairing mass sum_k P(A1 = a1k, A2 != a2sigma(k)) <= tol.
bool verify_perfect_correlation(const Observable& a1, const Observable& a2, const State& phi,
                                double tol);

}  // namespace qmeas
