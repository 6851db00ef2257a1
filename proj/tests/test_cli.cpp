#include <doctest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "qmeas/cli.hpp"
#include "qmeas/intersub.hpp"

using namespace qmeas;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QMEAS_TEST_DATA) + "/" + name; }

nlohmann::json report_of(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("verify-oit on Pauli-Z passes with seed 42") {
  const auto r = invoke({"verify-oit", "--input", data("oit_pauli_z.json"), "--json"});
  CHECK(r.code == cli::kExitPass);
  const auto doc = report_of(r);
  CHECK(doc["schema_version"] == "1");
  CHECK(doc["pass"] == true);
  CHECK(doc["metrics"]["off_diagonal_mass"].get<double>() < 1e-9);
  CHECK(doc["metrics"]["trials"] == 100);
  CHECK(doc["metrics"]["seed"] == 42);
  CHECK(doc["metrics"]["tolerance"] == 1e-9);
  CHECK(doc["metrics"]["label_tolerance"] == 1e-8);

  // every reported number comes straight from the library call
  const auto direct = verify_oit(Observable::diagonal({1, -1}), 100, 42);
  CHECK(doc["metrics"]["off_diagonal_mass"].get<double>() == direct.max_off_diagonal_mass);
  CHECK(doc["metrics"]["max_diagonal_gap"].get<double>() == direct.max_diagonal_gap);
}

TEST_CASE("verify-oit: flags override file values, diag(1,2,3) fixture") {
  const auto r = invoke({"verify-oit", "--input", data("oit_diag123.json"), "--json",
                         "--trials", "7", "--seed", "9", "--tol", "1e-8"});
  CHECK(r.code == 0);
  const auto doc = report_of(r);
  CHECK(doc["metrics"]["trials"] == 7);
  CHECK(doc["metrics"]["seed"] == 9);
  CHECK(doc["metrics"]["tolerance"] == 1e-8);
}

TEST_CASE("identical inputs give byte-identical JSON reports") {
  for (const char* cmd : {"verify-oit", "sample"}) {
    const std::string file = std::string(cmd) == "sample" ? "sample_oit_z.json" : "oit_pauli_z.json";
    const auto a = invoke({cmd, "--input", data(file), "--json"});
    const auto b = invoke({cmd, "--input", data(file), "--json"});
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("counterexample exits 1 and reports off-diagonal mass 1/2") {
  const auto r = invoke({"counterexample", "--json"});
  CHECK(r.code == cli::kExitVerificationFailed);
  const auto doc = report_of(r);
  CHECK(doc["pass"] == false);
  CHECK(std::abs(doc["metrics"]["off_diagonal_mass"].get<double>() - 0.5) < 1e-12);
  CHECK(doc["metrics"]["max_marginal_gap"].get<double>() < 1e-10);
  CHECK(doc["metrics"]["max_frobenius_error"].get<double>() < 1e-10);
  CHECK(doc["details"]["joint"].size() == 4);

  const auto text = invoke({"counterexample"});
  CHECK(text.code == 1);
  CHECK(text.out.find("qmeas counterexample: FAIL") != std::string::npos);
  const auto at = text.out.find("off_diagonal_mass = ");
  REQUIRE(at != std::string::npos);
  CHECK(std::abs(std::stod(text.out.substr(at + 20)) - 0.5) < 1e-12);
}

TEST_CASE("invalid input exits 2 with a diagnostic naming the invariant") {
  const auto r = invoke({"verify-oit", "--input", data("non_hermitian.json")});
  CHECK(r.code == cli::kExitInvalidInput);
  CHECK(r.err.find("input.observable") != std::string::npos);
  CHECK(r.err.find("not Hermitian") != std::string::npos);

  const auto j = invoke({"verify-oit", "--input", data("non_hermitian.json"), "--json"});
  CHECK(j.code == 2);
  CHECK(report_of(j)["error"]["kind"] == "invalid_input");

  CHECK(invoke({"verify-oit", "--input", data("bad_schema.json")}).code == 2);
  CHECK(invoke({"verify-oit", "--input", data("missing.json")}).code == 2);
  CHECK(invoke({"verify-oit"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"verify-oit", "--input", data("oit_pauli_z.json"), "--tol", "-1"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("reproducibility: von Neumann passes, uncoupled fails") {
  const auto vn = invoke({"reproducibility", "--input", data("reproducibility_von_neumann.json"), "--json"});
  CHECK(vn.code == 0);
  const auto doc = report_of(vn);
  CHECK(doc["metrics"]["max_frobenius_error"].get<double>() < 1e-10);
  CHECK(doc["metrics"]["max_statistical_gap"].get<double>() < 1e-9);
  CHECK(doc["details"]["labels_match"] == true);

  const auto idle = invoke({"reproducibility", "--input", data("reproducibility_uncoupled.json"), "--json"});
  CHECK(idle.code == 1);
  CHECK(report_of(idle)["metrics"]["max_statistical_gap"].get<double>() > 1e-3);
}

TEST_CASE("induced-povm and dilate") {
  const auto ip = invoke({"induced-povm", "--input", data("reproducibility_von_neumann.json"), "--json"});
  CHECK(ip.code == 0);
  const auto povm = report_of(ip)["details"]["povm"]["outcomes"];
  REQUIRE(povm.size() == 2);
  CHECK(report_of(ip)["metrics"]["is_projective"] == true);

  const auto d = invoke({"dilate", "--input", data("dilate_trine.json"), "--json"});
  CHECK(d.code == 0);
  const auto doc = report_of(d);
  CHECK(doc["metrics"]["max_frobenius_error"].get<double>() < 1e-9);
  CHECK(doc["details"]["process"]["ancilla_dim"] == 3);
  CHECK(doc["details"]["process"]["coupling"].size() == 6);
}

TEST_CASE("entangle and check-entanglement") {
  const auto e = invoke({"entangle", "--input", data("entangle_z.json"), "--json"});
  CHECK(e.code == 0);
  const auto doc = report_of(e);
  CHECK(doc["details"]["report"]["is_entangled"] == true);
  CHECK(doc["details"]["entangled_state"].size() == 4);

  const auto c = invoke({"check-entanglement", "--input", data("check_entanglement_product.json"), "--json"});
  CHECK(c.code == 1);
  CHECK(std::abs(report_of(c)["metrics"]["off_pairing_mass"].get<double>() - 0.5) < 1e-12);
}

TEST_CASE("sample: OIT Z-scenario frequencies") {
  const auto r = invoke({"sample", "--input", data("sample_oit_z.json"), "--json"});
  CHECK(r.code == 0);
  const auto doc = report_of(r);
  CHECK(doc["metrics"]["n"] == 100000);
  double diag_plus = -1.0;
  for (const auto& row : doc["details"]["counts"]) {
    if (row["x"] == 1.0 && row["y"] == 1.0) diag_plus = row["frequency"].get<double>();
    if (row["x"] != row["y"]) CHECK(row["count"] == 0);
  }
  CHECK(std::abs(diag_plus - 0.36) < 0.005);
}
