#pragma once

#include <string>
#include <vector>

#include "coopdyn/io.hpp"
#include "coopdyn/scenario.hpp"

namespace coopdyn {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct CommandResult {
  int exit_code = kExitOk;
  io::json report;
  std::vector<io::Artifact> artifacts;  // report.json is appended by run_command
};

const std::vector<std::string>& command_names();
bool is_command(const std::string& name);
/// Every command except oracle-1d draws random numbers and needs a seed.
bool command_needs_seed(const std::string& name);

/// Runs a command in memory. Throws Error on failure (unknown command,
/// missing seed or inputs, numerical failure).
CommandResult run_command(const std::string& name, const Scenario& scenario);

/// Parses the scenario, applies the seed override, runs the command and
/// writes its artifacts plus manifest.json into out_dir. Returns the exit code
/// (errors are reported on `error` and mapped to 1).
int run_command_to_directory(const std::string& name, const std::string& scenario_path, const std::string& out_dir,
                             const std::optional<std::uint64_t>& seed_override, std::string* error = nullptr);

}  // namespace coopdyn
