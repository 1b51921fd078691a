#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "imgsim/core_model.hpp"
#include "imgsim/impairments.hpp"
#include "imgsim/matrix.hpp"

namespace imgsim {

enum class EchoKind { Beamsteered2d, Switched2d, Beamsteered1d };

[[nodiscard]] const char *to_string(EchoKind kind);

// Measurement matrix plus the axis it was sampled on. For beam-steered data
// the axis is the wavenumber lattice (rad/m); for switched data it is the
// antenna position grid (m). 1D data is a single row.
struct EchoData {
  EchoKind kind = EchoKind::Beamsteered2d;
  CMatrix samples;
  double axis_start = 0.0;
  double axis_step = 0.0;
};

// Look directions for the 1D system: 2k sin(theta_i) = k_start + i * k_step.
struct ThetaGrid1d {
  std::vector<double> theta;
  double k_start = 0.0;
  double k_step = 0.0;

  [[nodiscard]] std::size_t size() const { return theta.size(); }
  [[nodiscard]] double k_at(std::size_t i) const {
    return k_start + static_cast<double>(i) * k_step;
  }
};

struct Reflector1d {
  double x = 0.0;
  cdouble amplitude{1.0, 0.0};
};

// Uniform 2k sin(theta) grid over +-2k sin(limit); limit is
// config.theta_limit_rad or atan(L / z0), capped at 85 degrees.
[[nodiscard]] ThetaGrid1d build_theta_grid_1d(const ImagingConfig &config, std::size_t grid_size);

// Element positions along x for the 1D array.
[[nodiscard]] std::vector<double> linear_positions(const ImagingConfig &config);

// Field at (x, y, z0) from the whole aperture:
//   A_b * sum_e exp(-j k r_e) W_e
// with A_b the beam-steering per-element amplitude. Weights are indexed like
// aperture_positions(); a count mismatch throws DimensionMismatch.
[[nodiscard]] cdouble transmit_field(Position point, double theta, double phi,
                                     const ImagingConfig &config,
                                     std::span<const cdouble> weights);

// Element-sum beam-steered acquisition over every unmasked grid point.
// Masked points stay zero. Receiver noise is injected per receive element
// before combining, fresh for every look.
[[nodiscard]] EchoData beamsteer_echo(const Scene &scene, const SteeringGrid &grid,
                                      const ImagingConfig &config,
                                      const ImpairmentSpec &impairments);

// Closed-form plane-wave echo (k cos theta)^-p sum_i f_i exp(-j 2k(...)).
// Throws GrazingAngle when cos(theta) < 1e-6 at an unmasked point.
[[nodiscard]] EchoData ideal_echo(const Scene &scene, const SteeringGrid &grid,
                                  const ImagingConfig &config);

// One colocated transceiver per antenna position, scaled by A_s.
[[nodiscard]] EchoData switched_echo(const Scene &scene, const ImagingConfig &config,
                                     const ImpairmentSpec &impairments);

// 1D beam-steered echo with i.i.d. phase noise on every tx and rx weight.
// `trial` selects an independent set of draws under the same seed.
[[nodiscard]] EchoData beamsteer_echo_1d(std::span<const Reflector1d> scene,
                                         const ThetaGrid1d &theta_grid,
                                         const ImagingConfig &config, double sigma_phi,
                                         std::uint64_t seed, std::uint32_t trial = 0);

} // namespace imgsim
