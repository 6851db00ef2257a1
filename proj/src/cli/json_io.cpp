#include "json_io.hpp"

#include <cmath>

#include "qmeas/cli.hpp"

namespace qmeas::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

// Re-raise library validation errors with the offending field attached.
template <typename F>
auto with_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const InputError&) {
    throw;
  } catch (const DomainError& e) {
    fail(path, e.what());
  } catch (const SizeError& e) {
    fail(path, e.what());
  }
}

double parse_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite number");
  return v;
}

Index parse_dim(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(path, "expected a positive integer");
  return static_cast<Index>(j.get<long long>());
}

}  // namespace

const json& require(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.is_object()) fail(path, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

Complex parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "complex entries are [re, im] pairs");
  return {parse_number(j[0], path + "[0]"), parse_number(j[1], path + "[1]")};
}

ComplexMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail(path + "[0]", "expected a nonempty row");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) fail(row_path, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          parse_complex(j[r][c], row_path + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

State parse_state(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty amplitude array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = parse_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return with_path(path, [&] { return State::normalized(v); });
}

Observable parse_observable(const json& j, const std::string& path) {
  if (j.is_object()) {
    const json& labels = require(j, "diagonal", path);
    if (!labels.is_array() || labels.empty()) fail(path + ".diagonal", "expected labels");
    std::vector<double> values;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      values.push_back(parse_number(labels[i], path + ".diagonal[" + std::to_string(i) + "]"));
    }
    return with_path(path, [&] { return Observable::diagonal(values); });
  }
  const ComplexMatrix m = parse_matrix(j, path);
  return with_path(path, [&] { return Observable(m); });
}

Povm parse_povm(const json& j, const std::string& path) {
  const json& outcomes = require(j, "outcomes", path);
  if (!outcomes.is_array() || outcomes.empty()) fail(path + ".outcomes", "expected outcomes");
  std::vector<Effect> effects;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::string p = path + ".outcomes[" + std::to_string(i) + "]";
    effects.push_back({parse_number(require(outcomes[i], "label", p), p + ".label"),
                       parse_matrix(require(outcomes[i], "effect", p), p + ".effect")});
  }
  return with_path(path, [&] { return Povm(std::move(effects)); });
}

MeasurementProcess parse_process(const json& j, const std::string& path) {
  const json& kind_json = require(j, "kind", path);
  if (!kind_json.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "von_neumann") {
    const Observable a = parse_observable(require(j, "observable", path), path + ".observable");
    return with_path(path, [&] { return build_vn_process(a); });
  }
  if (kind == "naimark") {
    const Povm p = parse_povm(require(j, "povm", path), path + ".povm");
    return with_path(path, [&] { return naimark_dilation(p); });
  }
  if (kind == "explicit" || kind == "uncoupled") {
    const Index system_dim = parse_dim(require(j, "system_dim", path), path + ".system_dim");
    const State xi = parse_state(require(j, "ancilla_state", path), path + ".ancilla_state");
    const Observable meter = parse_observable(require(j, "meter", path), path + ".meter");
    if (kind == "uncoupled") {
      return with_path(path, [&] { return uncoupled_process(system_dim, xi, meter); });
    }
    const ComplexMatrix u = parse_matrix(require(j, "coupling", path), path + ".coupling");
    return with_path(path, [&] { return MeasurementProcess(system_dim, xi, u, meter); });
  }
  fail(path + ".kind", "unknown process kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------

ordered_json to_json(Complex c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json to_json(const ComplexMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json to_json(const State& s) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < s.dim(); ++i) out.push_back(to_json(s[i]));
  return out;
}

ordered_json to_json(const Observable& a) {
  ordered_json branches = ordered_json::array();
  for (const auto& b : a.spectral()) {
    branches.push_back({{"eigenvalue", b.eigenvalue},
                        {"rank", std::lround(b.projector.trace().real())}});
  }
  return {{"matrix", to_json(a.op())}, {"spectrum", std::move(branches)}};
}

ordered_json to_json(const Povm& p) {
  ordered_json outcomes = ordered_json::array();
  for (const auto& o : p) outcomes.push_back({{"label", o.label}, {"effect", to_json(o.effect)}});
  return {{"outcomes", std::move(outcomes)}};
}

ordered_json to_json(const MeasurementProcess& mp) {
  return {{"kind", "explicit"},
          {"system_dim", mp.system_dim()},
          {"ancilla_dim", mp.ancilla_dim()},
          {"ancilla_state", to_json(mp.ancilla_state())},
          {"coupling", to_json(mp.coupling())},
          {"meter", to_json(mp.meter().op())}};
}

ordered_json to_json(const OutcomeDistribution& d) {
  ordered_json out = ordered_json::array();
  for (const auto& e : d) out.push_back({{"label", e.label}, {"probability", e.probability}});
  return out;
}

ordered_json to_json(const JointDistribution& d) {
  ordered_json out = ordered_json::array();
  for (const auto& e : d) out.push_back({{"x", e.x}, {"y", e.y}, {"probability", e.probability}});
  return out;
}

ordered_json to_json(const EntanglementReport& r) {
  ordered_json pairing = ordered_json::array();
  for (const auto& [k, m] : r.pairing) {
    pairing.push_back({{"label1", r.labels1[k]}, {"label2", r.labels2[m]}});
  }
  ordered_json conditions = ordered_json::object();
  for (std::size_t i = 0; i < kEntanglementConditionCount; ++i) {
    conditions[condition_name(static_cast<EntanglementCondition>(i))] = {
        {"holds", r.condition_results[i]}, {"violation", r.violations[i]}};
  }
  return {{"is_entangled", r.is_entangled},
          {"max_violation", r.max_violation},
          {"off_pairing_mass", r.off_pairing_mass},
          {"pairing", std::move(pairing)},
          {"conditions", std::move(conditions)},
          {"labels1", r.labels1},
          {"labels2", r.labels2},
          {"joint", r.joint}};
}

}  // namespace qmeas::cli
