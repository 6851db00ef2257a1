#pragma once

// qmeas command-line front end: JSON scenario documents in, run reports out.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmeas/errors.hpp"

namespace qmeas::cli {

inline constexpr const char* kSchemaVersion = "1";

enum ExitCode : int {
  kExitPass = 0,
  kExitVerificationFailed = 1,
  kExitInvalidInput = 2,
  kExitInternalError = 3,
};

// Malformed or schema-violating input document.
class InputError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct Options {
  std::string subcommand;
  std::optional<std::string> input;
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::optional<double> label_tol;
};

struct RunReport {
  std::string command;
  bool pass = false;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand on an already-parsed input document (null for
/// `counterexample`). Library and input errors propagate as exceptions.
RunReport execute(const Options& options, const nlohmann::json& input);

/// Full CLI: argument parsing, file loading, report rendering and exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmeas::cli
