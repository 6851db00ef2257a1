#pragma once

// JSON encoding of library values. Complex numbers are [re, im] pairs and
// matrices are row-major arrays of rows.

#include <string>

#include <json.hpp>

#include "qmeas/intersub.hpp"

namespace qmeas::cli {

using nlohmann::json;
using nlohmann::ordered_json;

// `path` names the field in diagnostics, e.g. "input.process.coupling".
const json& require(const json& doc, const std::string& key, const std::string& path);

Complex parse_complex(const json& j, const std::string& path);
ComplexMatrix parse_matrix(const json& j, const std::string& path);
/// Amplitude list, rescaled to unit norm.
State parse_state(const json& j, const std::string& path);
/// Either a Hermitian matrix or {"diagonal": [labels...]}.
Observable parse_observable(const json& j, const std::string& path);
/// {"outcomes": [{"label": x, "effect": matrix}, ...]}
Povm parse_povm(const json& j, const std::string& path);
/// {"kind": "explicit" | "uncoupled" | "von_neumann" | "naimark", ...}
MeasurementProcess parse_process(const json& j, const std::string& path);

ordered_json to_json(Complex c);
ordered_json to_json(const ComplexMatrix& m);
ordered_json to_json(const State& s);
ordered_json to_json(const Observable& a);
ordered_json to_json(const Povm& p);
ordered_json to_json(const MeasurementProcess& mp);
ordered_json to_json(const OutcomeDistribution& d);
ordered_json to_json(const JointDistribution& d);
ordered_json to_json(const EntanglementReport& r);

}  // namespace qmeas::cli
