#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace rwam::app {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kConfigError = 2, kIoError = 3 };

/// Settings shared by every subcommand; empty optionals keep config values.
struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<std::string> out;
  std::vector<std::string> strategies;  // filter; empty keeps all
  std::optional<double> k;
};

/// Loads the config and applies command-line overrides.
ExperimentConfig resolve(const RunOptions& options);

int cmd_space_info(const RunOptions& options);
int cmd_build(const RunOptions& options);
int cmd_verify(const RunOptions& options, const std::vector<std::string>& mesh_paths);
int cmd_cover(const RunOptions& options);
int cmd_sweep(const RunOptions& options);
int cmd_haar(const RunOptions& options, std::optional<int> M, std::optional<std::size_t> trials);

/// Full command line entry point: parses arguments, runs, maps errors to
/// exit codes and prints diagnostics to stderr.
int run(int argc, char** argv);

}  // namespace rwam::app
