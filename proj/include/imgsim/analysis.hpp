#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imgsim/core_model.hpp"
#include "imgsim/forward_sim.hpp"
#include "imgsim/reconstruction.hpp"

namespace imgsim {

// SSL of the expected PSF against phase-noise standard deviation.
struct SslCurve {
  std::vector<double> sigma_values; // rad, ascending
  std::vector<double> ssl_db;
  int n_antennas = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

struct BreakpointReport {
  double sigma_sb = 0.0; // sidelobe suppression breakpoint (rad)
  double sigma_tb = 0.0; // upper threshold (rad)
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double floor_db = 0.0; // noise-free SSL
};

// SSL band that feeds the straight-line fit, and the level defining sigma_TB.
struct FitWindow {
  double lower_db = -10.0;
  double upper_db = -2.0;
  double threshold_db = -1.0;
};

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

struct SizePoint {
  int n_antennas = 0;
  double sigma = 0.0;
};

struct PsfOptions {
  std::size_t grid_size = 0;  // 0: default_grid_size of the reference config
  std::size_t oversample = 8; // profile sampling relative to 2 pi / (M dk)
};

// Mean over trials of |reconstruct_1d| for a unit point target at x = 0.
[[nodiscard]] std::vector<double> psf_1d(const ImagingConfig &config, const ThetaGrid1d &grid,
                                         double sigma_phi, std::size_t trials,
                                         std::uint64_t seed, std::size_t oversample = 8);
[[nodiscard]] std::vector<double> psf_1d(const ImagingConfig &config, double sigma_phi,
                                         std::size_t trials, std::uint64_t seed,
                                         const PsfOptions &options = {});

// 20 log10(largest sidelobe peak / global peak). The mainlobe runs from the
// global peak down to the first local minimum on each side. Returns -inf when
// no local maximum lies outside it; throws AnalysisError without a strict
// global maximum.
[[nodiscard]] double ssl(std::span<const double> profile);

// SSL sweep for one array size at constant total aperture: spacing becomes
// reference.n_antennas * reference.spacing_m / n_antennas. The look grid is
// taken from the reference configuration and held fixed across sizes.
[[nodiscard]] SslCurve ssl_sweep(int n_antennas, std::span<const double> sigma_values,
                                 std::size_t trials, const ImagingConfig &reference,
                                 std::uint64_t seed, const PsfOptions &options = {});

// Least-squares line through SSL samples inside the window; sigma_SB where
// the line meets the noise-free floor, sigma_TB where it reaches the
// threshold. Throws FitFailure for < 3 samples, a non-positive slope, or
// breakpoints outside the swept range.
[[nodiscard]] BreakpointReport breakpoint_fit(const SslCurve &curve, const FitWindow &window = {});

// sigma = slope * log10(N_a) + intercept, least squares.
[[nodiscard]] LogFit breakpoint_model_fit(std::span<const SizePoint> points);

[[nodiscard]] double resolution_beamsteer(double x, double y, const ImagingConfig &config);
[[nodiscard]] double resolution_switched(const ImagingConfig &config);

// Transmit plus receive beamforming gain, 2 * 10 log10(N_a^2).
[[nodiscard]] double array_gain_db(int n_antennas);

// Echo-domain SNR advantage of beam steering over switched acquisition for a
// unit point target at (0, 0, z0), both at equal total transmit power and
// equal absolute per-element noise variance. SNR is the strongest noiseless
// sample over the empirical noise variance (noisy minus noiseless).
struct GainMeasurement {
  double beamsteer_snr_db = 0.0;
  double switched_snr_db = 0.0;
  double gain_db = 0.0;
};
[[nodiscard]] GainMeasurement measure_processing_gain(const ImagingConfig &config,
                                                      std::size_t grid_size,
                                                      double noise_power_w, std::uint64_t seed);

// Plane-wave (Fraunhofer) distance 2 D^2 / lambda, D the aperture diagonal.
[[nodiscard]] double far_field_distance(const ImagingConfig &config);

struct ImageError {
  double peak_offset_m = 0.0;
  double normalized_rmse = 0.0;
  double peak_to_background_db = 0.0;
};

// Truth is rasterized onto the image grid (nearest pixel). Background is the
// image outside the truth support dilated by `dilation` pixels.
[[nodiscard]] ImageError image_error(const Image &recon, const Scene &truth, int dilation = 2);

// Local maximum of |image| with a sub-pixel (per-axis parabolic) position.
struct Peak {
  std::size_t row = 0;
  std::size_t col = 0;
  double magnitude = 0.0;
  Position position;
};

// Strict 8-neighbour local maxima of |image|, strongest first.
[[nodiscard]] std::vector<Peak> find_peaks(const Image &image);
// Brightest pixel.
[[nodiscard]] Peak brightest_pixel(const Image &image);

// Two-reflector measurement: the two strongest peaks, their sub-pixel
// separation, and the dip between them relative to the weaker peak.
struct PairMeasurement {
  std::size_t peak_count = 0; // significant peaks (within 10 dB of the strongest)
  double separation_m = 0.0;  // 0 when fewer than two peaks
  double dip_db = 0.0;        // weaker peak over the minimum along the joining line
};
[[nodiscard]] PairMeasurement measure_pair(const Image &image);

} // namespace imgsim
