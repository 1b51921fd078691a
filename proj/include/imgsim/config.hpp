#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imgsim/core_model.hpp"
#include "imgsim/impairments.hpp"

namespace imgsim {

// Phase-noise sweep and breakpoint fit settings.
struct SweepSettings {
  std::vector<int> n_antennas{16, 64, 128};
  double sigma_min_rad = 0.0;
  double sigma_max_rad = 5.0;
  double sigma_step_rad = 0.1;
  std::size_t trials = 200;
  std::size_t psf_oversample = 8;
  double fit_lower_db = -10.0;
  double fit_upper_db = -2.0;
  double fit_threshold_db = -1.0;

  // Inclusive sigma grid, min + i * step up to max.
  [[nodiscard]] std::vector<double> sigma_values() const;

  bool operator==(const SweepSettings &) const = default;
};

struct ExperimentConfig {
  ImagingConfig imaging;
  std::optional<std::size_t> grid_size; // default_grid_size(n_antennas) when unset
  ImpairmentSpec impairments;
  std::string scene;            // CSV/PGM path or builtin name
  std::string output_dir = "."; // artifacts land here
  std::string method = "beamsteer";
  std::string echo_model = "element"; // element | ideal
  std::string echo_path;              // reconstruct from a saved echo instead of simulating
  SweepSettings sweep;
  double separation_m = 10e-3;
  double offset_x_m = 20e-3;
  int two_reflector_bits = 2;

  [[nodiscard]] std::size_t resolved_grid_size() const;
  void validate() const;

  bool operator==(const ExperimentConfig &) const = default;
};

// key = value lines, '#' starts a comment. Required keys: frequency_hz,
// n_antennas, spacing_m, z0_m. Errors are ParseError or InvalidConfig and
// name the offending key.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
[[nodiscard]] ExperimentConfig load_config(const std::string &path);

// Every key, one per line, in a fixed order; reparses to an equal config.
[[nodiscard]] std::string serialize_config(const ExperimentConfig &config);

// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double value);

} // namespace imgsim
