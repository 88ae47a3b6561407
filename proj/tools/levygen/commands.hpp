#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace levygen::cli {

struct RunOptions {
  std::optional<std::uint64_t> seed;   // overrides the config "seed"
  int workers = 1;
};

struct OutputFile {
  std::string name;
  std::string text;
};

struct CommandResult {
  json summary;                      // written as <command>.json
  std::vector<OutputFile> files;     // CSV outputs
  bool pass = true;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"symbol", "generator", "simulate", "asymptotics", "verify"};
  return names;
}

/// Runs one command on a parsed config. Throws ConfigError on schema problems and lets
/// numerical errors from the library propagate.
CommandResult run_command(const std::string& command, const json& config, const RunOptions& opt);

/// Exit code for an exception escaping run_command: 2 for config, contract and domain
/// errors, 3 for non-convergence and insufficient regularity.
int exit_code_for(const std::exception& e);

}  // namespace levygen::cli
