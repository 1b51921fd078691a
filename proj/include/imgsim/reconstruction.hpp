#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "imgsim/core_model.hpp"
#include "imgsim/forward_sim.hpp"
#include "imgsim/matrix.hpp"

namespace imgsim {

// Complex reflectivity estimate on a regular grid. Pixel (r, c) sits at
// origin + (c * pitch_x, r * pitch_y).
struct Image {
  CMatrix pixels;
  double pitch_x = 0.0;
  double pitch_y = 0.0;
  Position origin;
  std::string provenance;

  [[nodiscard]] Position pixel_position(std::size_t row, std::size_t col) const {
    return {origin.x + static_cast<double>(col) * pitch_x,
            origin.y + static_cast<double>(row) * pitch_y};
  }
};

// 1D reconstruction; sample n sits at origin + n * pitch.
struct Profile {
  std::vector<cdouble> values;
  double pitch = 0.0;
  double origin = 0.0;

  [[nodiscard]] double position(std::size_t n) const {
    return origin + static_cast<double>(n) * pitch;
  }
};

// Beam-steered inverse: each unmasked sample times
// (k cos theta)^p exp(+2j k z_f cos theta), masked samples zero, then a 2D
// inverse transform. Pitch is 2 pi / (M dk) and the spatial origin falls on
// pixel (M/2, M/2). Throws DimensionMismatch if echo and grid disagree.
[[nodiscard]] Image reconstruct_beamsteer(const EchoData &echo, const SteeringGrid &grid,
                                          const ImagingConfig &config, double z_f);

// exp(-j 2k sqrt(x'^2 + y'^2 + z_f^2)) on the antenna grid.
[[nodiscard]] CMatrix impulse_response(const ImagingConfig &config, double z_f);

// Zero-padded transform size used by the switched reconstructions.
[[nodiscard]] std::size_t switched_padded_size(int n_antennas);

// Correlation with the impulse response focused at z_f, computed spectrally
// on a padded grid. Pixels sit at integer multiples of the antenna pitch,
// lags -N/2 .. N-1-N/2 on each axis.
[[nodiscard]] Image reconstruct_switched_mf(const EchoData &echo, const ImagingConfig &config,
                                            double z_f);

// Wavenumber-domain inversion with the visible-region mask
// kx^2 + ky^2 < (2k)^2, amplitude 1/kz and focusing phase at z_f. Output uses
// the same pixel grid as reconstruct_switched_mf.
[[nodiscard]] Image reconstruct_switched_spectral(const EchoData &echo,
                                                  const ImagingConfig &config, double z_f);

// 1D beam-steered inverse. `oversample` zero-pads the spectrum so the
// profile is sampled oversample times finer than 2 pi / (M dk).
// Throws InvalidConfig if 2k sin(theta) is not uniform on the grid.
[[nodiscard]] Profile reconstruct_1d(const EchoData &echo, const ThetaGrid1d &theta_grid,
                                     const ImagingConfig &config, double z_f,
                                     std::size_t oversample = 1);

} // namespace imgsim
