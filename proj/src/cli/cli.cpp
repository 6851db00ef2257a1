#include "qmeas/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "json_io.hpp"

namespace qmeas::cli {

namespace {

constexpr std::size_t kDefaultTrials = 100;
constexpr std::size_t kDefaultCrossCheckStates = 50;
constexpr std::size_t kDefaultSamples = 10000;
constexpr double kSampleZThreshold = 3.0;

struct Settings {
  double tol;
  double label_tol;
};

Settings settings_for(const Options& o) {
  const double tol = o.tol.value_or(kOitTol);
  const double label_tol = o.label_tol.value_or(kLabelTol);
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InputError("--tol must be positive");
  if (!(label_tol > 0.0) || !std::isfinite(label_tol)) {
    throw InputError("--label-tol must be positive");
  }
  return {tol, label_tol};
}

void record_tolerances(RunReport& r, const Settings& s) {
  r.metrics["tolerance"] = s.tol;
  r.metrics["label_tolerance"] = s.label_tol;
  r.metrics["probability_sum_tolerance"] = kProbabilitySumTol;
}

std::uint64_t seed_from(const Options& o, const json& input) {
  if (o.seed) return *o.seed;
  if (input.is_object() && input.contains("seed")) {
    const json& s = input["seed"];
    if (!s.is_number_unsigned()) throw InputError("input.seed: expected a nonnegative integer");
    return s.get<std::uint64_t>();
  }
  return 0;
}

std::size_t count_from(const std::optional<std::size_t>& flag, const json& input,
                       const char* key, std::size_t fallback) {
  if (flag) return *flag;
  if (input.is_object() && input.contains(key)) {
    const json& v = input[key];
    if (!v.is_number_unsigned()) {
      throw InputError(std::string("input.") + key + ": expected a nonnegative integer");
    }
    return v.get<std::size_t>();
  }
  return fallback;
}

double max_effect_gap(const Povm& expected, const Povm& actual, double label_tol) {
  double gap = 0.0;
  for (const auto& e : expected) {
    const ComplexMatrix* other = actual.find(e.label, label_tol);
    gap = std::max(gap, other ? frobenius_distance(*other, e.effect) : e.effect.norm());
  }
  for (const auto& e : actual) {
    if (expected.find(e.label, label_tol) == nullptr) gap = std::max(gap, e.effect.norm());
  }
  return gap;
}

double resolution_error(const Povm& p) {
  ComplexMatrix sum = ComplexMatrix::Zero(p.dim(), p.dim());
  for (const auto& e : p) sum += e.effect;
  return (sum - identity(p.dim())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

RunReport run_verify_oit(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const Observable a = parse_observable(require(in, "observable", "input"), "input.observable");
  const std::size_t trials = count_from(o.trials, in, "trials", kDefaultTrials);
  if (trials == 0) throw InputError("trials must be positive");
  const std::uint64_t seed = seed_from(o, in);
  const OitSummary summary = verify_oit(a, trials, seed, s.tol, s.label_tol);

  RunReport r{"verify-oit", summary.passes};
  r.metrics["off_diagonal_mass"] = summary.max_off_diagonal_mass;
  r.metrics["max_diagonal_gap"] = summary.max_diagonal_gap;
  r.metrics["max_frobenius_error"] =
      std::max(summary.reproducibility_gap1, summary.reproducibility_gap2);
  r.metrics["commutator_norm"] = summary.commutator_norm;
  r.metrics["trials"] = trials;
  r.metrics["seed"] = seed;
  record_tolerances(r, s);
  r.details["observable"] = to_json(a);
  r.details["observer1"] = "von_neumann";
  r.details["observer2"] = "naimark";
  return r;
}

RunReport run_reproducibility(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const MeasurementProcess mp = parse_process(require(in, "process", "input"), "input.process");
  const Observable a = parse_observable(require(in, "observable", "input"), "input.observable");
  if (a.dim() != mp.system_dim()) {
    throw InputError("input.observable: dimension does not match process system_dim");
  }
  const ReproducibilityCheck check = probability_reproducibility(mp, a, s.tol, s.label_tol);

  const std::size_t states = count_from(o.trials, in, "trials", kDefaultCrossCheckStates);
  const std::uint64_t seed = seed_from(o, in);
  double statistical_gap = 0.0;
  for (std::size_t t = 0; t < states; ++t) {
    const State psi = random_state(a.dim(), derive_seed(seed, t));
    statistical_gap = std::max(statistical_gap, max_pointwise_gap(born_probabilities(a, psi),
                                                                  outcome_distribution(mp, psi),
                                                                  s.label_tol));
  }

  RunReport r{"reproducibility", check.reproduces};
  r.metrics["max_frobenius_error"] = check.max_frobenius_gap;
  r.metrics["max_statistical_gap"] = statistical_gap;
  r.metrics["trials"] = states;
  r.metrics["seed"] = seed;
  record_tolerances(r, s);
  ordered_json gaps = ordered_json::array();
  const auto labels = a.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    gaps.push_back({{"label", labels[i]}, {"frobenius_gap", check.frobenius_gaps[i]}});
  }
  r.details["labels_match"] = check.labels_match;
  r.details["frobenius_gaps"] = std::move(gaps);
  r.details["induced_povm"] = to_json(induced_povm(mp));
  return r;
}

RunReport run_induced_povm(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const MeasurementProcess mp = parse_process(require(in, "process", "input"), "input.process");
  const Povm pi = induced_povm(mp);
  RunReport r{"induced-povm", is_resolution_of_identity(pi, s.tol)};
  r.metrics["resolution_error"] = resolution_error(pi);
  r.metrics["is_projective"] = is_projective(pi, s.tol);
  record_tolerances(r, s);
  r.details["povm"] = to_json(pi);
  return r;
}

RunReport run_dilate(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const Povm p = parse_povm(require(in, "povm", "input"), "input.povm");
  MeasurementProcess mp = [&] {
    try {
      return naimark_dilation(p);
    } catch (const DomainError& e) {
      throw InputError(std::string("input.povm: ") + e.what());
    }
  }();
  const double gap = max_effect_gap(p, induced_povm(mp), s.label_tol);
  RunReport r{"dilate", gap <= s.tol};
  r.metrics["max_frobenius_error"] = gap;
  record_tolerances(r, s);
  r.details["process"] = to_json(mp);
  return r;
}

RunReport run_entangle(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const State psi = parse_state(require(in, "state", "input"), "input.state");
  const Observable a = parse_observable(require(in, "observable", "input"), "input.observable");
  if (psi.dim() != a.dim()) throw InputError("input.state: dimension does not match observable");
  const MeasurementProcess mp = build_vn_process(a);
  const State phi = entangled_state(psi, a);
  const EntanglementReport report = check_observable_entanglement(a, mp.meter(), phi, s.tol);

  RunReport r{"entangle", report.is_entangled};
  r.metrics["max_violation"] = report.max_violation;
  r.metrics["off_pairing_mass"] = report.off_pairing_mass;
  record_tolerances(r, s);
  r.details["entangled_state"] = to_json(phi);
  r.details["dims"] = {a.dim(), mp.ancilla_dim()};
  r.details["report"] = to_json(report);
  return r;
}

RunReport run_check_entanglement(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const State phi = parse_state(require(in, "state", "input"), "input.state");
  const Observable a1 = parse_observable(require(in, "observable1", "input"), "input.observable1");
  const Observable a2 = parse_observable(require(in, "observable2", "input"), "input.observable2");
  if (in.contains("dims")) {
    const json& dims = in["dims"];
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
        !dims[1].is_number_integer() || dims[0].get<long long>() != a1.dim() ||
        dims[1].get<long long>() != a2.dim()) {
      throw InputError("input.dims: must be [dim(observable1), dim(observable2)]");
    }
  }
  if (phi.dim() != a1.dim() * a2.dim()) {
    throw InputError("input.state: dimension is not dim(observable1) * dim(observable2)");
  }
  const EntanglementReport report = check_observable_entanglement(a1, a2, phi, s.tol);
  RunReport r{"check-entanglement", report.is_entangled};
  r.metrics["max_violation"] = report.max_violation;
  r.metrics["off_pairing_mass"] = report.off_pairing_mass;
  record_tolerances(r, s);
  r.details["report"] = to_json(report);
  return r;
}

RunReport run_counterexample(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const State psi = in.is_object() && in.contains("state")
                        ? parse_state(in["state"], "input.state")
                        : State::basis(2, 0);
  if (psi.dim() != 2) throw InputError("input.state: the counterexample acts on a qubit");
  const Counterexample ce = counterexample_uninformative_povm();
  const JointDistribution joint = joint_distribution(ce.scenario, psi);
  const IntersubjectivityReport report =
      check_intersubjectivity(ce.scenario, psi, s.tol, s.label_tol);
  const OutcomeDistribution target = povm_probabilities(ce.povm, psi);
  const double marginal_gap =
      std::max(max_pointwise_gap(joint.first_marginal(), target, s.label_tol),
               max_pointwise_gap(joint.second_marginal(), target, s.label_tol));
  const double povm_gap =
      std::max(max_effect_gap(ce.povm, induced_povm(ce.scenario.process1()), s.label_tol),
               max_effect_gap(ce.povm, induced_povm(ce.scenario.process2()), s.label_tol));

  RunReport r{"counterexample", report.passes};
  r.metrics["off_diagonal_mass"] = report.off_diagonal_mass;
  r.metrics["max_marginal_gap"] = marginal_gap;
  r.metrics["max_frobenius_error"] = povm_gap;
  record_tolerances(r, s);
  r.details["povm"] = to_json(ce.povm);
  r.details["state"] = to_json(psi);
  r.details["joint"] = to_json(joint);
  r.details["marginal1"] = to_json(joint.first_marginal());
  r.details["marginal2"] = to_json(joint.second_marginal());
  return r;
}

RunReport run_sample(const Options& o, const json& in) {
  const Settings s = settings_for(o);
  const json& sc = require(in, "scenario", "input");
  const MeasurementProcess p1 = parse_process(require(sc, "process1", "input.scenario"),
                                              "input.scenario.process1");
  const MeasurementProcess p2 = parse_process(require(sc, "process2", "input.scenario"),
                                              "input.scenario.process2");
  CompositionOrder order = CompositionOrder::kFirstThenSecond;
  if (sc.contains("order")) {
    const json& ord = sc["order"];
    if (ord == "first_then_second") {
      order = CompositionOrder::kFirstThenSecond;
    } else if (ord == "second_then_first") {
      order = CompositionOrder::kSecondThenFirst;
    } else {
      throw InputError("input.scenario.order: expected first_then_second or second_then_first");
    }
  }
  const JointScenario scenario = [&] {
    try {
      return compose_joint_scenario(p1, p2, order);
    } catch (const DomainError& e) {
      throw InputError(std::string("input.scenario: ") + e.what());
    }
  }();
  const State psi = parse_state(require(in, "state", "input"), "input.state");
  if (psi.dim() != scenario.system_dim()) {
    throw InputError("input.state: dimension does not match the scenario system");
  }
  const std::size_t n = count_from(std::nullopt, in, "n", kDefaultSamples);
  const std::uint64_t seed = seed_from(o, in);
  const JointDistribution joint = joint_distribution(scenario, psi);
  const auto counts = sample_outcomes(scenario, psi, n, seed);

  double max_z = 0.0;
  ordered_json rows = ordered_json::array();
  for (const auto& e : joint) {
    std::size_t c = 0;
    for (const auto& k : counts) {
      if (k.x == e.x && k.y == e.y) c = k.count;
    }
    const double freq = n == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(n);
    if (n > 0) {
      const double se = std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(n));
      const double dev = std::abs(freq - e.probability);
      max_z = std::max(max_z, se > 0.0 ? dev / se : (dev > 0.0 ? INFINITY : 0.0));
    }
    rows.push_back({{"x", e.x}, {"y", e.y}, {"count", c}, {"frequency", freq},
                    {"probability", e.probability}});
  }
  RunReport r{"sample", max_z <= kSampleZThreshold};
  r.metrics["n"] = n;
  r.metrics["seed"] = seed;
  r.metrics["max_standard_errors"] = std::isfinite(max_z) ? ordered_json(max_z) : ordered_json("inf");
  r.metrics["z_threshold"] = kSampleZThreshold;
  r.metrics["commutator_norm"] = scenario.commutator_norm();
  record_tolerances(r, s);
  r.details["counts"] = std::move(rows);
  return r;
}

json load_input(const Options& o) {
  if (!o.input) {
    if (o.subcommand == "counterexample") return json();
    throw InputError("--input FILE is required for " + o.subcommand);
  }
  std::ifstream file(*o.input);
  if (!file) throw InputError("cannot open input file " + *o.input);
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("input is not valid JSON: ") + e.what());
  }
  const json& version = require(doc, "schema_version", "input");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
    throw InputError(std::string("input.schema_version: expected \"") + kSchemaVersion + "\"");
  }
  return doc;
}

void emit_error(std::ostream& out, std::ostream& err, const Options& o, const char* kind,
                const std::string& message, int code) {
  err << "qmeas: " << kind << ": " << message << "\n";
  if (o.json) {
    ordered_json doc = {{"schema_version", kSchemaVersion},
                        {"command", o.subcommand},
                        {"error", {{"kind", kind}, {"message", message}}},
                        {"exit_code", code}};
    out << doc.dump(2) << "\n";
  }
}

}  // namespace

ordered_json RunReport::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"pass", pass},
          {"metrics", metrics},
          {"details", details}};
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "qmeas " << command << ": " << (pass ? "PASS" : "FAIL") << "\n";
  for (const auto& [key, value] : metrics.items()) os << "  " << key << " = " << value.dump() << "\n";
  os << "details:\n" << details.dump(2) << "\n";
  return os.str();
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "verify-oit", "reproducibility", "induced-povm", "dilate",
      "entangle",   "check-entanglement", "counterexample", "sample"};
  return names;
}

RunReport execute(const Options& o, const json& input) {
  const std::string& c = o.subcommand;
  if (c == "verify-oit") return run_verify_oit(o, input);
  if (c == "reproducibility") return run_reproducibility(o, input);
  if (c == "induced-povm") return run_induced_povm(o, input);
  if (c == "dilate") return run_dilate(o, input);
  if (c == "entangle") return run_entangle(o, input);
  if (c == "check-entanglement") return run_check_entanglement(o, input);
  if (c == "counterexample") return run_counterexample(o, input);
  if (c == "sample") return run_sample(o, input);
  throw InputError("unknown subcommand " + c);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum measurement process verifier"};
  app.name("qmeas");
  app.add_option("subcommand", o.subcommand, "One of: verify-oit, reproducibility, induced-povm, "
                 "dilate, entangle, check-entanglement, counterexample, sample")
      ->required()
      ->check(CLI::IsMember(subcommands()));
  app.add_option("--input", o.input, "Scenario document (JSON, schema_version \"1\")");
  app.add_flag("--json", o.json, "Emit a machine-readable report");
  app.add_option("--seed", o.seed, "Seed for random trials / sampling");
  app.add_option("--trials", o.trials, "Number of random trials");
  app.add_option("--tol", o.tol, "Pass tolerance (default 1e-9)");
  app.add_option("--label-tol", o.label_tol, "Outcome label matching width (default 1e-8)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "qmeas: " << e.what() << "\n" << app.help();
    return kExitInvalidInput;
  }

  try {
    const RunReport report = execute(o, load_input(o));
    out << (o.json ? report.to_json().dump(2) + "\n" : report.to_text());
    return report.pass ? kExitPass : kExitVerificationFailed;
  } catch (const NumericalError& e) {
    emit_error(out, err, o, "numerical_error", e.what(), kExitInternalError);
    return kExitInternalError;
  } catch (const ConsistencyError& e) {
    emit_error(out, err, o, "consistency_error", e.what(), kExitInternalError);
    return kExitInternalError;
  } catch (const Error& e) {
    // DomainError (incl. InputError), SizeError, LocalityError
    emit_error(out, err, o, "invalid_input", e.what(), kExitInvalidInput);
    return kExitInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    emit_error(out, err, o, "invalid_input", e.what(), kExitInvalidInput);
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    emit_error(out, err, o, "internal_error", e.what(), kExitInternalError);
    return kExitInternalError;
  }
}

}  // namespace qmeas::cli
