#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "rwam/asymptotics.hpp"

namespace rwam::app {

struct HaarConfig {
  int M = 3;
  std::size_t trials = 100000;
};

/// Everything a command needs. `sweep.jobs` and `output_dir` are run
/// settings and do not enter the hash.
struct ExperimentConfig {
  SweepConfig sweep;
  std::string output_dir = "rwam-out";
  HaarConfig haar;
  int l2_trials = 100;
};

/// Parses YAML text. Unknown keys and malformed values raise config errors
/// that name the key and its line in `origin`.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolved config with every default written out, keys sorted.
nlohmann::json to_json(const ExperimentConfig& config);
std::string canonical_text(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a 64 over the canonical text.
std::string config_hash(const ExperimentConfig& config);

std::string fnv1a_hex(std::string_view text);

/// Canonical short strategy name: mu, muv, uniform or nu.
std::string short_name(Strategy s);

/// Defaults for a strategy; the admissible mesh strategies need r > 1.
StrategyConfig strategy_defaults(Strategy s);

}  // namespace rwam::app
