#include "qmeas/vonneumann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmeas {

namespace {

constexpr std::size_t kExhaustivePairingLimit = 6;

using Matrix = std::vector<std::vector<double>>;
using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

ComplexMatrix cyclic_shift_power(Index n, Index k) {
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Index m = 0; m < n; ++m) s((m + k) % n, m) = 1.0;
  return s;
}

Matrix transpose(const Matrix& m) {
  if (m.empty()) return {};
  Matrix t(m.front().size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

// Injective assignment rows -> cols (rows <= cols) maximizing the summed weight.
// First maximum in lexicographic search order wins ties.
std::vector<std::size_t> best_assignment_exhaustive(const Matrix& w) {
  const std::size_t rows = w.size();
  const std::size_t cols = w.front().size();
  std::vector<std::size_t> current(rows), best(rows);
  std::vector<bool> used(cols, false);
  double best_value = -1.0;

  auto search = [&](auto&& self, std::size_t row, double value) -> void {
    if (row == rows) {
      if (value > best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (used[c]) continue;
      used[c] = true;
      current[row] = c;
      self(self, row + 1, value + w[row][c]);
      used[c] = false;
    }
  };
  search(search, 0, 0.0);
  return best;
}

std::vector<std::size_t> best_assignment_greedy(const Matrix& w) {
  const std::size_t rows = w.size();
  const std::size_t cols = w.front().size();
  std::vector<std::size_t> out(rows);
  std::vector<bool> row_done(rows, false), col_used(cols, false);
  for (std::size_t step = 0; step < rows; ++step) {
    double best = -1.0;
    std::size_t br = 0, bc = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (row_done[r]) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!col_used[c] && w[r][c] > best) {
          best = w[r][c];
          br = r;
          bc = c;
        }
      }
    }
    row_done[br] = true;
    col_used[bc] = true;
    out[br] = bc;
  }
  return out;
}

Pairing best_pairing(const Matrix& joint) {
  const std::size_t n1 = joint.size();
  const std::size_t n2 = joint.front().size();
  const bool flip = n1 > n2;
  const Matrix w = flip ? transpose(joint) : joint;
  const auto assignment = std::max(n1, n2) <= kExhaustivePairingLimit
                              ? best_assignment_exhaustive(w)
                              : best_assignment_greedy(w);
  Pairing out;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    out.emplace_back(flip ? assignment[r] : r, flip ? r : assignment[r]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Matrix joint_probabilities(const Observable& a1, const Observable& a2, const State& phi) {
  const Index d1 = a1.dim();
  const Index d2 = a2.dim();
  ComplexMatrix c(d1, d2);
  for (Index i = 0; i < d1; ++i) {
    for (Index j = 0; j < d2; ++j) c(i, j) = phi[i * d2 + j];
  }
  // (E1 (x) E2) phi  <->  E1 C E2^T
  Matrix joint(a1.spectral().size(), std::vector<double>(a2.spectral().size()));
  for (std::size_t k = 0; k < a1.spectral().size(); ++k) {
    const ComplexMatrix left = a1.spectral()[k].projector * c;
    for (std::size_t m = 0; m < a2.spectral().size(); ++m) {
      const ComplexMatrix image = left * a2.spectral()[m].projector.transpose();
      joint[k][m] = clamp_probability(c.cwiseProduct(image.conjugate()).sum().real());
    }
  }
  return joint;
}

}  // namespace

const char* condition_name(EntanglementCondition c) {
  switch (c) {
    case EntanglementCondition::kOffPairingVanishes: return "off_pairing_vanishes";
    case EntanglementCondition::kPairedMassIsOne: return "paired_mass_is_one";
    case EntanglementCondition::kFirstMarginalMatches: return "first_marginal_matches";
    case EntanglementCondition::kSecondMarginalMatches: return "second_marginal_matches";
    case EntanglementCondition::kConditionalsAreOne: return "conditionals_are_one";
  }
  return "unknown";
}

MeasurementProcess build_vn_process(const Observable& a) {
  const auto& spectral = a.spectral();
  const Index n = static_cast<Index>(spectral.size());
  const Index d = a.dim();
  ComplexMatrix coupling = ComplexMatrix::Zero(d * n, d * n);
  for (Index k = 0; k < n; ++k) {
    coupling += tensor(spectral[k].projector, cyclic_shift_power(n, k));
  }
  return MeasurementProcess(d, State::basis(n, 0), std::move(coupling),
                            Observable::diagonal(a.labels()));
}

State entangled_state(const State& psi, const Observable& a) {
  if (psi.dim() != a.dim()) {
    throw DomainError("entangled_state: state dimension " + std::to_string(psi.dim()) +
                      " != observable dimension " + std::to_string(a.dim()));
  }
  const MeasurementProcess mp = build_vn_process(a);
  const State initial = tensor(psi, mp.ancilla_state());
  return State(mp.coupling() * initial.amplitudes());
}

EntanglementReport check_observable_entanglement(const Observable& a1, const Observable& a2,
                                                 const State& phi, double tol) {
  if (phi.dim() != a1.dim() * a2.dim()) {
    throw DomainError("check_observable_entanglement: state dimension " +
                      std::to_string(phi.dim()) + " != " + std::to_string(a1.dim()) + " x " +
                      std::to_string(a2.dim()));
  }
  EntanglementReport report;
  report.labels1 = a1.labels();
  report.labels2 = a2.labels();
  report.joint = joint_probabilities(a1, a2, phi);
  report.pairing = best_pairing(report.joint);

  const auto& joint = report.joint;
  const std::size_t n1 = joint.size();
  const std::size_t n2 = joint.front().size();
  std::vector<double> marginal1(n1, 0.0), marginal2(n2, 0.0);
  for (std::size_t k = 0; k < n1; ++k) {
    for (std::size_t m = 0; m < n2; ++m) {
      marginal1[k] += joint[k][m];
      marginal2[m] += joint[k][m];
    }
  }
  std::vector<long> partner1(n1, -1), partner2(n2, -1);
  for (const auto& [k, m] : report.pairing) {
    partner1[k] = static_cast<long>(m);
    partner2[m] = static_cast<long>(k);
  }

  auto& v = report.violations;
  auto at = [](EntanglementCondition c) { return static_cast<std::size_t>(c); };
  double paired = 0.0;
  for (std::size_t k = 0; k < n1; ++k) {
    for (std::size_t m = 0; m < n2; ++m) {
      if (partner1[k] == static_cast<long>(m)) {
        paired += joint[k][m];
      } else {
        report.off_pairing_mass += joint[k][m];
        v[at(EntanglementCondition::kOffPairingVanishes)] =
            std::max(v[at(EntanglementCondition::kOffPairingVanishes)], joint[k][m]);
      }
    }
  }
  v[at(EntanglementCondition::kPairedMassIsOne)] = std::max(0.0, 1.0 - paired);
  for (std::size_t k = 0; k < n1; ++k) {
    const double pj = partner1[k] < 0 ? 0.0 : joint[k][partner1[k]];
    v[at(EntanglementCondition::kFirstMarginalMatches)] =
        std::max(v[at(EntanglementCondition::kFirstMarginalMatches)], std::abs(marginal1[k] - pj));
  }
  for (std::size_t m = 0; m < n2; ++m) {
    const double pj = partner2[m] < 0 ? 0.0 : joint[partner2[m]][m];
    v[at(EntanglementCondition::kSecondMarginalMatches)] =
        std::max(v[at(EntanglementCondition::kSecondMarginalMatches)], std::abs(marginal2[m] - pj));
  }
  for (const auto& [k, m] : report.pairing) {
    const double pj = joint[k][m];
    if (pj <= tol) continue;  // conditionals only defined on nonzero pairs
    const double given_second = pj / marginal2[m];
    const double given_first = pj / marginal1[k];
    v[at(EntanglementCondition::kConditionalsAreOne)] =
        std::max({v[at(EntanglementCondition::kConditionalsAreOne)],
                  std::abs(1.0 - given_second), std::abs(1.0 - given_first)});
  }

  report.is_entangled = true;
  for (std::size_t i = 0; i < kEntanglementConditionCount; ++i) {
    report.condition_results[i] = v[i] <= tol;
    report.is_entangled = report.is_entangled && report.condition_results[i];
    report.max_violation = std::max(report.max_violation, v[i]);
  }
  return report;
}

std::pair<Observable, Observable> find_entangled_observables(const State& phi, Index dim1,
                                                             Index dim2) {
  const SchmidtDecomposition schmidt = schmidt_decompose(phi, dim1, dim2);
  auto observable_on = [](const std::vector<State>& basis, Index dim) {
    ComplexMatrix partial(dim, static_cast<Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      partial.col(static_cast<Index>(k)) = basis[k].amplitudes();
    }
    const ComplexMatrix full = complete_isometry_to_unitary(partial);
    std::vector<SpectralBranch> branches;
    for (Index k = 0; k < dim; ++k) {
      branches.push_back({static_cast<double>(k + 1), full.col(k) * full.col(k).adjoint()});
    }
    return Observable::from_spectral(SpectralDecomposition(std::move(branches)));
  };
  return {observable_on(schmidt.left_basis, dim1), observable_on(schmidt.right_basis, dim2)};
}

bool verify_perfect_correlation(const Observable& a1, const Observable& a2, const State& phi,
                                double tol) {
  return check_observable_entanglement(a1, a2, phi, tol).off_pairing_mass <= tol;
}

}  // namespace qmeas
