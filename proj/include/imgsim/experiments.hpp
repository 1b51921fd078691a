#pragma once

#include <string>
#include <vector>

#include "imgsim/config.hpp"
#include "imgsim/core_model.hpp"

namespace imgsim {

[[nodiscard]] const std::vector<std::string> &experiment_names();

// Builtins "t-target" and "two-point" (separation_m, offset 0), otherwise a
// scene file. An empty name throws InvalidConfig.
[[nodiscard]] Scene resolve_scene(const ExperimentConfig &config);

struct RunResult {
  std::vector<std::string> artifacts; // paths, in write order
  std::string manifest_path;
};

// Runs one subcommand, writing artifacts and manifest.json into
// config.output_dir (created if missing). Throws on unknown subcommands,
// invalid configs and I/O failures.
RunResult run_experiment(const std::string &subcommand, const ExperimentConfig &config);

} // namespace imgsim
