#include "qmeas/measproc.hpp"

#include <cmath>
#include <string>

namespace qmeas {

namespace {

constexpr double kPovmValidityTol = 1e-9;

// I_H (x) |xi>, the isometry H -> H (x) K used to contract the ancilla.
ComplexMatrix ancilla_embedding(Index system_dim, const State& xi) {
  return tensor(identity(system_dim), ComplexMatrix(xi.amplitudes()));
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

MeasurementProcess::MeasurementProcess(Index system_dim, State ancilla_state,
                                       ComplexMatrix coupling, Observable meter)
    : system_dim_(system_dim),
      ancilla_state_(std::move(ancilla_state)),
      coupling_(std::move(coupling)),
      meter_(std::move(meter)) {
  if (system_dim_ < 1) throw DomainError("measurement process: system_dim must be positive");
  const Index k = ancilla_state_.dim();
  if (meter_.dim() != k) {
    throw DomainError("measurement process: meter dimension " + std::to_string(meter_.dim()) +
                      " != ancilla dimension " + std::to_string(k));
  }
  const Index n = system_dim_ * k;
  if (n > kProductDimGuard) throw SizeError("measurement process: composite too large");
  if (coupling_.rows() != n || coupling_.cols() != n) {
    throw DomainError("measurement process: coupling must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  }
  if (!is_unitary(coupling_)) {
    throw DomainError("measurement process: coupling is not unitary");
  }
}

MeasurementProcess uncoupled_process(Index system_dim, State ancilla_state, Observable meter) {
  const Index n = system_dim * ancilla_state.dim();
  return MeasurementProcess(system_dim, std::move(ancilla_state), identity(n), std::move(meter));
}

Observable heisenberg_meter(const MeasurementProcess& mp) {
  const ComplexMatrix& u = mp.coupling();
  const ComplexMatrix id = identity(mp.system_dim());
  std::vector<SpectralBranch> branches;
  for (const auto& b : mp.meter().spectral()) {
    branches.push_back(
        {b.eigenvalue, hermitian_part(u.adjoint() * tensor(id, b.projector) * u)});
  }
  return Observable::from_spectral(SpectralDecomposition(std::move(branches)));
}

OutcomeDistribution outcome_distribution(const MeasurementProcess& mp, const State& psi) {
  if (psi.dim() != mp.system_dim()) {
    throw DomainError("outcome_distribution: state dimension " + std::to_string(psi.dim()) +
                      " != system dimension " + std::to_string(mp.system_dim()));
  }
  const State joint = tensor(psi, mp.ancilla_state());
  return born_probabilities(heisenberg_meter(mp), joint);
}

Povm induced_povm(const MeasurementProcess& mp) {
  const ComplexMatrix w = ancilla_embedding(mp.system_dim(), mp.ancilla_state());
  const Observable evolved = heisenberg_meter(mp);
  std::vector<Effect> effects;
  for (const auto& b : evolved.spectral()) {
    effects.push_back({b.eigenvalue, hermitian_part(w.adjoint() * b.projector * w)});
  }
  return Povm(std::move(effects));
}

ReproducibilityCheck probability_reproducibility(const MeasurementProcess& mp,
                                                 const Observable& a, double tol,
                                                 double label_tol) {
  if (a.dim() != mp.system_dim()) {
    throw DomainError("reproducibility: observable dimension " + std::to_string(a.dim()) +
                      " != system dimension " + std::to_string(mp.system_dim()));
  }
  const Povm induced = induced_povm(mp);
  const Index n = a.dim();
  const ComplexMatrix zero = ComplexMatrix::Zero(n, n);

  ReproducibilityCheck out{true, 0.0, {}, true};
  for (const auto& b : a.spectral()) {
    const ComplexMatrix* pi = induced.find(b.eigenvalue, label_tol);
    if (pi == nullptr) out.labels_match = false;
    const double gap = frobenius_distance(pi ? *pi : zero, b.projector);
    out.frobenius_gaps.push_back(gap);
    out.max_frobenius_gap = std::max(out.max_frobenius_gap, gap);
  }
  const Povm target = Povm::from_observable(a);
  for (const auto& o : induced) {
    if (target.find(o.label, label_tol) != nullptr) continue;
    const double gap = o.effect.norm();
    if (gap > tol) out.labels_match = false;
    out.max_frobenius_gap = std::max(out.max_frobenius_gap, gap);
  }
  out.reproduces = out.max_frobenius_gap <= tol;
  return out;
}

bool check_probability_reproducibility(const MeasurementProcess& mp, const Observable& a,
                                       double tol, double label_tol) {
  return probability_reproducibility(mp, a, tol, label_tol).reproduces;
}

MeasurementProcess naimark_dilation(const Povm& p) {
  if (!is_resolution_of_identity(p, kPovmValidityTol)) {
    throw DomainError("naimark_dilation: effects do not form a valid POVM");
  }
  const Index d = p.dim();
  const Index n = static_cast<Index>(p.size());
  if (d * n > kProductDimGuard) throw SizeError("naimark_dilation: dilation too large");

  // Column j is the image of |j>|0>: sum_x (sqrt(Pi(x)) |j>) (x) |x>.
  ComplexMatrix isometry = ComplexMatrix::Zero(d * n, d);
  std::vector<double> labels;
  for (Index x = 0; x < n; ++x) {
    const ComplexMatrix root = principal_sqrt(p[x].effect);
    labels.push_back(p[x].label);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) isometry(i * n + x, j) = root(i, j);
    }
  }
  const ComplexMatrix completed = complete_isometry_to_unitary(isometry);

  // Place the isometry columns at the |j>|0> positions, the completion elsewhere.
  ComplexMatrix coupling(d * n, d * n);
  Index spare = d;
  for (Index col = 0; col < d * n; ++col) {
    coupling.col(col) = (col % n == 0) ? completed.col(col / n) : completed.col(spare++);
  }
  return MeasurementProcess(d, State::basis(n, 0), std::move(coupling),
                            Observable::diagonal(labels));
}

}  // namespace qmeas
