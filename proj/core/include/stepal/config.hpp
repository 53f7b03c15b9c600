#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stepal/experiment.hpp"

namespace stepal {

/// Experiment description loaded from a JSON file. Keys mirror the
/// ExperimentConfig fields and the CLI flags:
///
///   { "benchmark": "default", "gen": { "n_videos": 120, ... },
///     "manifest": "pool.samf", "strategy": "stepal", "strategies": ["random", "stepal"],
///     "initial_label_frac": 0.1, "budget_frac": 0.1, "cycles": 4,
///     "train": { "learning_rate": 0.1, "epochs": 200, "batch_size": 64, "l2": 1e-4, "seed": 0 },
///     "seeds": [0, 1, 2], "eps": 1e-8, "restarts": 10, "max_iter": 100, "tol": 1e-6,
///     "output_dir": "results", "workers": 1 }
///
/// Unknown keys are rejected. "benchmark" is applied before "gen" overrides.
struct LoadedConfig {
  ExperimentConfig experiment;
  std::vector<std::string> strategies;
};

[[nodiscard]] LoadedConfig parse_config(std::string_view json_text);
[[nodiscard]] LoadedConfig load_config(const std::filesystem::path& path);

/// JSON form of a GenConfig, used in metadata output.
[[nodiscard]] std::string gen_config_json(const GenConfig& gen);

}  // namespace stepal
