#include "qmeas/intersub.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qmeas {

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Operator on H (x) K2 lifted to H (x) K1 (x) K2, identity on K1.
ComplexMatrix lift_past_first_ancilla(const ComplexMatrix& op, Index h, Index k1, Index k2) {
  const Index n = h * k1 * k2;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < h; ++c) {
      for (Index a = 0; a < k1; ++a) {
        for (Index b = 0; b < k2; ++b) {
          for (Index bb = 0; bb < k2; ++bb) {
            out((r * k1 + a) * k2 + b, (c * k1 + a) * k2 + bb) = op(r * k2 + b, c * k2 + bb);
          }
        }
      }
    }
  }
  return out;
}

Observable evolve(const ComplexMatrix& u, const Observable& meter, const ComplexMatrix& left,
                  const ComplexMatrix& right) {
  std::vector<SpectralBranch> branches;
  for (const auto& b : meter.spectral()) {
    const ComplexMatrix lifted = tensor(tensor(left, b.projector), right);
    branches.push_back({b.eigenvalue, hermitian_part(u.adjoint() * lifted * u)});
  }
  return Observable::from_spectral(SpectralDecomposition(std::move(branches)));
}

}  // namespace

JointScenario::JointScenario(MeasurementProcess p1, MeasurementProcess p2, ComplexMatrix coupling,
                             Observable m1, Observable m2, double commutator_norm)
    : process1_(std::move(p1)),
      process2_(std::move(p2)),
      composite_coupling_(std::move(coupling)),
      evolved_meter1_(std::move(m1)),
      evolved_meter2_(std::move(m2)),
      commutator_norm_(commutator_norm) {}

State JointScenario::initial_state(const State& psi) const {
  if (psi.dim() != system_dim()) {
    throw DomainError("joint scenario: state dimension " + std::to_string(psi.dim()) +
                      " != system dimension " + std::to_string(system_dim()));
  }
  return tensor(tensor(psi, process1_.ancilla_state()), process2_.ancilla_state());
}

double check_locality(const Observable& m1, const Observable& m2, double tol) {
  const double norm = commutator(m1.op(), m2.op()).norm();
  if (!(norm <= tol)) {
    throw LocalityError("evolved meters do not commute: ||[M1, M2]||_F = " +
                        std::to_string(norm));
  }
  return norm;
}

JointScenario compose_joint_scenario(const MeasurementProcess& p1, const MeasurementProcess& p2,
                                     CompositionOrder order) {
  if (p1.system_dim() != p2.system_dim()) {
    throw DomainError("compose_joint_scenario: processes act on different systems (" +
                      std::to_string(p1.system_dim()) + " vs " +
                      std::to_string(p2.system_dim()) + ")");
  }
  const Index h = p1.system_dim();
  const Index k1 = p1.ancilla_dim();
  const Index k2 = p2.ancilla_dim();
  if (h * k1 * k2 > kProductDimGuard) {
    throw SizeError("compose_joint_scenario: composite dimension exceeds guard");
  }
  const ComplexMatrix u1 = tensor(p1.coupling(), identity(k2));
  const ComplexMatrix u2 = lift_past_first_ancilla(p2.coupling(), h, k1, k2);
  ComplexMatrix u = order == CompositionOrder::kFirstThenSecond ? ComplexMatrix(u2 * u1)
                                                                : ComplexMatrix(u1 * u2);

  Observable m1 = evolve(u, p1.meter(), identity(h), identity(k2));
  Observable m2 = evolve(u, p2.meter(), identity(h * k1), identity(1));
  const double norm = check_locality(m1, m2);
  return JointScenario(p1, p2, std::move(u), std::move(m1), std::move(m2), norm);
}

// ---------------------------------------------------------------------------

JointDistribution::JointDistribution(std::vector<JointOutcome> entries)
    : entries_(std::move(entries)) {
  double total = 0.0;
  for (auto& e : entries_) {
    e.probability = clamp_probability(e.probability);
    total += e.probability;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw NumericalError("joint distribution: total " + std::to_string(total) + " != 1");
  }
}

double JointDistribution::probability_of(double x, double y, double label_tol) const {
  double p = 0.0;
  for (const auto& e : entries_) {
    if (std::abs(e.x - x) <= label_tol && std::abs(e.y - y) <= label_tol) p += e.probability;
  }
  return p;
}

namespace {

OutcomeDistribution marginal(const std::vector<JointOutcome>& entries, bool first) {
  std::vector<Outcome> out;
  for (const auto& e : entries) {
    const double label = first ? e.x : e.y;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Outcome& o) { return o.label == label; });
    if (it == out.end()) {
      out.push_back({label, e.probability});
    } else {
      it->probability += e.probability;
    }
  }
  return OutcomeDistribution(std::move(out));
}

}  // namespace

OutcomeDistribution JointDistribution::first_marginal() const { return marginal(entries_, true); }
OutcomeDistribution JointDistribution::second_marginal() const {
  return marginal(entries_, false);
}

JointDistribution joint_distribution(const JointScenario& s, const State& psi) {
  const ComplexVector state = s.initial_state(psi).amplitudes();
  std::vector<ComplexVector> images2;
  for (const auto& b : s.evolved_meter2().spectral()) images2.push_back(b.projector * state);

  std::vector<JointOutcome> entries;
  for (const auto& b1 : s.evolved_meter1().spectral()) {
    const ComplexVector image1 = b1.projector * state;
    std::size_t m = 0;
    for (const auto& b2 : s.evolved_meter2().spectral()) {
      entries.push_back({b1.eigenvalue, b2.eigenvalue, image1.dot(images2[m++]).real()});
    }
  }
  return JointDistribution(std::move(entries));
}

double max_joint_gap(const JointDistribution& p, const JointDistribution& q, double label_tol) {
  double gap = 0.0;
  for (const auto& e : p) {
    gap = std::max(gap, std::abs(e.probability - q.probability_of(e.x, e.y, label_tol)));
  }
  for (const auto& e : q) {
    gap = std::max(gap, std::abs(e.probability - p.probability_of(e.x, e.y, label_tol)));
  }
  return gap;
}

IntersubjectivityReport check_intersubjectivity(const JointScenario& s, const State& psi,
                                                double tol, double label_tol,
                                                const Observable* target) {
  const JointDistribution joint = joint_distribution(s, psi);
  IntersubjectivityReport report;
  report.tolerance_used = tol;
  for (const auto& e : joint) {
    if (std::abs(e.x - e.y) > label_tol) {
      report.off_diagonal_mass += e.probability;
      continue;
    }
    auto it = std::find_if(report.diagonal.begin(), report.diagonal.end(),
                           [&](const Outcome& o) { return o.label == e.x; });
    if (it == report.diagonal.end()) {
      report.diagonal.push_back({e.x, e.probability});
    } else {
      it->probability += e.probability;
    }
  }
  report.passes = report.off_diagonal_mass <= tol;

  if (target != nullptr) {
    const OutcomeDistribution born = born_probabilities(*target, psi);
    double gap = 0.0;
    for (const auto& o : born) {
      double diag = 0.0;
      for (const auto& d : report.diagonal) {
        if (std::abs(d.label - o.label) <= label_tol) diag += d.probability;
      }
      gap = std::max(gap, std::abs(diag - o.probability));
    }
    for (const auto& d : report.diagonal) {
      if (born.probability_of(d.label, label_tol) == 0.0) gap = std::max(gap, d.probability);
    }
    report.max_diagonal_gap = gap;
    report.diagonal_matches_born = gap <= tol;
  }
  return report;
}

OitSummary verify_oit(const Observable& a, std::size_t trials, std::uint64_t seed, double tol,
                      double label_tol) {
  if (trials == 0) throw DomainError("verify_oit: trials must be positive");
  const MeasurementProcess vn = build_vn_process(a);
  const MeasurementProcess dilated = naimark_dilation(Povm::from_observable(a));

  OitSummary summary;
  summary.trials = trials;
  summary.seed = seed;
  summary.tolerance = tol;
  const auto check1 = probability_reproducibility(vn, a, kOitTol, label_tol);
  const auto check2 = probability_reproducibility(dilated, a, kOitTol, label_tol);
  summary.reproducibility_gap1 = check1.max_frobenius_gap;
  summary.reproducibility_gap2 = check2.max_frobenius_gap;
  if (!check1.reproduces || !check2.reproduces) {
    throw ConsistencyError("verify_oit: constructed process does not reproduce the observable");
  }

  const JointScenario scenario = compose_joint_scenario(vn, dilated);
  summary.commutator_norm = scenario.commutator_norm();
  bool all_pass = true;
  // Each trial is a pure function of (a, seed, t); only max-aggregates are kept.
  for (std::size_t t = 0; t < trials; ++t) {
    const State psi = random_state(a.dim(), derive_seed(seed, t));
    const auto report = check_intersubjectivity(scenario, psi, tol, label_tol, &a);
    summary.max_off_diagonal_mass = std::max(summary.max_off_diagonal_mass, report.off_diagonal_mass);
    summary.max_diagonal_gap = std::max(summary.max_diagonal_gap, *report.max_diagonal_gap);
    all_pass = all_pass && report.passes && *report.diagonal_matches_born;
  }
  summary.passes = all_pass;
  return summary;
}

Counterexample counterexample_uninformative_povm() {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexMatrix hadamard(2, 2);
  hadamard << r, r, r, -r;
  const Observable meter = Observable::diagonal({0.0, 1.0});
  const MeasurementProcess coin(2, State::basis(2, 0), tensor(identity(2), hadamard), meter);

  Povm povm({{0.0, 0.5 * identity(2)}, {1.0, 0.5 * identity(2)}});
  return {std::move(povm), compose_joint_scenario(coin, coin)};
}

std::vector<JointCount> sample_outcomes(const JointScenario& s, const State& psi, std::size_t n,
                                        std::uint64_t seed) {
  const JointDistribution joint = joint_distribution(s, psi);
  std::vector<double> cumulative;
  double running = 0.0;
  for (const auto& e : joint) cumulative.push_back(running += e.probability);

  std::vector<std::size_t> counts(joint.size(), 0);
  SeededRng rng(seed);
  for (std::size_t draw = 0; draw < n; ++draw) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }

  std::vector<JointCount> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) out.push_back({joint.entries()[i].x, joint.entries()[i].y, counts[i]});
  }
  return out;
}

}  // namespace qmeas
