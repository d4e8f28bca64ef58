#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trisol/config.hpp"

namespace trisol::cli {

/// Process exit codes; stable for scripting.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kHypothesisFailure = 3,
  kNumericalFailure = 4,
};

/// Values printed in the published ball example, used as comparison columns.
namespace reference {
inline constexpr double c1 = 0.00445759;
inline constexpr double cq = 0.171543;
inline constexpr double kappa = 1.16798;
inline constexpr double k1 = 8.82557;
inline constexpr double k2 = 6.66307;
inline constexpr double inf_quotient = 162.872;
inline constexpr double rhs = 86.0932;
inline constexpr double mu = 0.01;
}  // namespace reference

struct OutputFile {
  std::string name;
  std::string content;
};

/// A command's full output, produced in memory; nothing touches disk until
/// write_outputs runs after the computation has finished.
struct CommandResult {
  int exit_code = kOk;
  nlohmann::json report;
  std::string summary;
  std::vector<OutputFile> files;
};

CommandResult run_constants(const RunConfig& config);
CommandResult run_check(const RunConfig& config);
CommandResult run_solve(const RunConfig& config);
/// Built-in ball example: constants under both radius readings, hypotheses,
/// admissible interval, proof chain and critical points, each compared with
/// the published numbers.
CommandResult run_reproduce(std::uint64_t seed = 42);

void write_outputs(const CommandResult& result, const std::filesystem::path& dir);

/// Full CLI dispatch used by the trisol executable. Returns the exit code.
int run_command(const std::string& command, const std::optional<std::string>& config_path,
                std::optional<std::uint64_t> seed, std::optional<std::string> out_dir, std::ostream& out,
                std::ostream& err);

}  // namespace trisol::cli
