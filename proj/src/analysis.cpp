#include "imgsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "imgsim/errors.hpp"
#include "imgsim/parallel.hpp"

namespace imgsim {

namespace {

double parabolic_offset(double left, double centre, double right) {
  const double denom = left - 2.0 * centre + right;
  if (denom >= 0.0) {
    return 0.0;
  }
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

RMatrix magnitudes(const Image &image) {
  RMatrix out(image.pixels.rows(), image.pixels.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.flat()[i] = std::abs(image.pixels.flat()[i]);
  }
  return out;
}

Peak make_peak(const Image &image, const RMatrix &mag, std::size_t r, std::size_t c) {
  Peak p{r, c, mag(r, c), image.pixel_position(r, c)};
  if (c > 0 && c + 1 < mag.cols()) {
    p.position.x += image.pitch_x * parabolic_offset(mag(r, c - 1), mag(r, c), mag(r, c + 1));
  }
  if (r > 0 && r + 1 < mag.rows()) {
    p.position.y += image.pitch_y * parabolic_offset(mag(r - 1, c), mag(r, c), mag(r + 1, c));
  }
  return p;
}

// Bilinear |image| sample at fractional pixel coordinates.
double sample_bilinear(const RMatrix &mag, double row, double col) {
  const auto r0 = static_cast<std::size_t>(std::floor(row));
  const auto c0 = static_cast<std::size_t>(std::floor(col));
  const std::size_t r1 = std::min(r0 + 1, mag.rows() - 1);
  const std::size_t c1 = std::min(c0 + 1, mag.cols() - 1);
  const double fr = row - static_cast<double>(r0);
  const double fc = col - static_cast<double>(c0);
  return (1 - fr) * ((1 - fc) * mag(r0, c0) + fc * mag(r0, c1)) +
         fr * ((1 - fc) * mag(r1, c0) + fc * mag(r1, c1));
}

} // namespace

std::vector<double> psf_1d(const ImagingConfig &config, const ThetaGrid1d &grid,
                           double sigma_phi, std::size_t trials, std::uint64_t seed,
                           std::size_t oversample) {
  if (trials < 1) {
    throw InvalidConfig("trials must be >= 1");
  }
  const std::vector<Reflector1d> target{{0.0, {1.0, 0.0}}};
  const std::size_t length = grid.size() * oversample;
  std::vector<std::vector<double>> per_trial(trials);
  parallel_for(trials, [&](std::size_t t) {
    const auto echo = beamsteer_echo_1d(target, grid, config, sigma_phi, seed,
                                        static_cast<std::uint32_t>(t));
    const auto profile = reconstruct_1d(echo, grid, config, config.focus(), oversample);
    auto &mag = per_trial[t];
    mag.resize(length);
    for (std::size_t n = 0; n < length; ++n) {
      mag[n] = std::abs(profile.values[n]);
    }
  });
  std::vector<double> mean(length, 0.0);
  for (const auto &mag : per_trial) {
    for (std::size_t n = 0; n < length; ++n) {
      mean[n] += mag[n];
    }
  }
  for (auto &v : mean) {
    v /= static_cast<double>(trials);
  }
  return mean;
}

std::vector<double> psf_1d(const ImagingConfig &config, double sigma_phi, std::size_t trials,
                           std::uint64_t seed, const PsfOptions &options) {
  const std::size_t m =
      options.grid_size != 0 ? options.grid_size : default_grid_size(config.n_antennas);
  return psf_1d(config, build_theta_grid_1d(config, m), sigma_phi, trials, seed,
                options.oversample);
}

double ssl(std::span<const double> profile) {
  if (profile.empty()) {
    throw AnalysisError("ssl: empty profile");
  }
  const auto peak_it = std::max_element(profile.begin(), profile.end());
  const double peak = *peak_it;
  if (!(peak > 0.0) || std::count(profile.begin(), profile.end(), peak) != 1) {
    throw AnalysisError("ssl: profile has no strict global maximum");
  }
  const auto g = static_cast<std::size_t>(peak_it - profile.begin());
  const std::size_t n = profile.size();
  std::size_t left = g;
  while (left > 0 && profile[left - 1] < profile[left]) {
    --left;
  }
  std::size_t right = g;
  while (right + 1 < n && profile[right + 1] < profile[right]) {
    ++right;
  }
  double best = -1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (i >= left && i <= right) {
      continue;
    }
    if (profile[i] > profile[i - 1] && profile[i] >= profile[i + 1]) {
      best = std::max(best, profile[i]);
    }
  }
  if (best <= 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return 20.0 * std::log10(best / peak);
}

SslCurve ssl_sweep(int n_antennas, std::span<const double> sigma_values, std::size_t trials,
                   const ImagingConfig &reference, std::uint64_t seed,
                   const PsfOptions &options) {
  reference.validate();
  if (n_antennas < 1) {
    throw InvalidConfig("n_antennas must be >= 1");
  }
  if (!std::is_sorted(sigma_values.begin(), sigma_values.end())) {
    throw InvalidConfig("sigma values must be ascending");
  }
  const std::size_t m =
      options.grid_size != 0 ? options.grid_size : default_grid_size(reference.n_antennas);
  const ThetaGrid1d grid = build_theta_grid_1d(reference, m);

  ImagingConfig config = reference;
  config.n_antennas = n_antennas;
  config.spacing_m = reference.spacing_m * static_cast<double>(reference.n_antennas) /
                     static_cast<double>(n_antennas);

  SslCurve curve;
  curve.sigma_values.assign(sigma_values.begin(), sigma_values.end());
  curve.n_antennas = n_antennas;
  curve.trials = trials;
  curve.seed = seed;
  curve.ssl_db.reserve(sigma_values.size());
  for (double sigma : sigma_values) {
    const auto profile = psf_1d(config, grid, sigma, trials, seed, options.oversample);
    curve.ssl_db.push_back(ssl(profile));
  }
  return curve;
}

BreakpointReport breakpoint_fit(const SslCurve &curve, const FitWindow &window) {
  if (curve.sigma_values.size() != curve.ssl_db.size() || curve.sigma_values.empty()) {
    throw FitFailure("SSL curve arrays are empty or of unequal length");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < curve.ssl_db.size(); ++i) {
    const double v = curve.ssl_db[i];
    if (std::isfinite(v) && v >= window.lower_db && v <= window.upper_db) {
      xs.push_back(curve.sigma_values[i]);
      ys.push_back(v);
    }
  }
  if (xs.size() < 3) {
    throw FitFailure("only " + std::to_string(xs.size()) + " SSL samples inside [" +
                     std::to_string(window.lower_db) + ", " + std::to_string(window.upper_db) +
                     "] dB; need 3");
  }
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0) || !(sxy / sxx > 0.0)) {
    throw FitFailure("SSL line fit has non-positive slope");
  }
  BreakpointReport report;
  report.fit_slope = sxy / sxx;
  report.fit_intercept = my - report.fit_slope * mx;
  report.floor_db = curve.ssl_db.front();
  if (!std::isfinite(report.floor_db)) {
    throw FitFailure("noise-free SSL floor is not finite");
  }
  report.sigma_sb = (report.floor_db - report.fit_intercept) / report.fit_slope;
  report.sigma_tb = (window.threshold_db - report.fit_intercept) / report.fit_slope;
  const double lo = curve.sigma_values.front();
  const double hi = curve.sigma_values.back();
  if (report.sigma_sb < lo || report.sigma_sb > hi || report.sigma_tb < lo ||
      report.sigma_tb > hi) {
    throw FitFailure("breakpoints fall outside the swept sigma range");
  }
  return report;
}

LogFit breakpoint_model_fit(std::span<const SizePoint> points) {
  if (points.size() < 2) {
    throw FitFailure("need at least two array sizes");
  }
  double mx = 0.0;
  double my = 0.0;
  for (const auto &p : points) {
    if (p.n_antennas < 1) {
      throw FitFailure("array sizes must be positive");
    }
    mx += std::log10(static_cast<double>(p.n_antennas));
    my += p.sigma;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto &p : points) {
    const double dx = std::log10(static_cast<double>(p.n_antennas)) - mx;
    sxx += dx * dx;
    sxy += dx * (p.sigma - my);
  }
  if (!(sxx > 0.0)) {
    throw FitFailure("array sizes must include at least two distinct values");
  }
  LogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double resolution_beamsteer(double x, double y, const ImagingConfig &config) {
  config.validate();
  const double range = std::sqrt(x * x + y * y + config.z0_m * config.z0_m);
  const double theta = std::atan(std::hypot(x, y) / config.z0_m);
  const double limit = config.theta_limit_rad.value_or(kMaxThetaLimit);
  if (theta >= limit) {
    throw InvalidConfig("target at theta = " + std::to_string(theta) +
                        " rad is outside theta_limit_rad");
  }
  const double aperture = static_cast<double>(config.n_antennas - 1) * config.spacing_m;
  const double cos_t = config.z0_m / range;
  return 0.5 * config.wavelength() * range / aperture / cos_t;
}

double resolution_switched(const ImagingConfig &config) {
  config.validate();
  const double aperture = static_cast<double>(config.n_antennas - 1) * config.spacing_m;
  return 0.5 * config.wavelength() * config.z0_m / aperture;
}

double array_gain_db(int n_antennas) {
  if (n_antennas < 1) {
    throw InvalidConfig("n_antennas must be >= 1");
  }
  const double n = static_cast<double>(n_antennas);
  return 2.0 * 10.0 * std::log10(n * n);
}

namespace {

// Strongest |clean| sample and mean |noisy - clean|^2 over the sampled set.
std::pair<double, double> peak_and_noise(const CMatrix &clean, const CMatrix &noisy,
                                         const std::vector<unsigned char> &used) {
  double peak = 0.0;
  double noise = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (!used[i]) {
      continue;
    }
    peak = std::max(peak, std::norm(clean.flat()[i]));
    noise += std::norm(noisy.flat()[i] - clean.flat()[i]);
    ++count;
  }
  return {peak, noise / static_cast<double>(count)};
}

} // namespace

GainMeasurement measure_processing_gain(const ImagingConfig &config, std::size_t grid_size,
                                        double noise_power_w, std::uint64_t seed) {
  if (!(noise_power_w > 0.0)) {
    throw InvalidConfig("noise_power_w must be positive");
  }
  const Scene target(std::vector<Reflector>{{0.0, 0.0, {1.0, 0.0}}});
  const ImagingConfig resolved = resolve_theta_limit(config, target);
  const SteeringGrid grid = build_steering_grid(resolved, grid_size);
  ImpairmentSpec noise;
  noise.noise_power_w = noise_power_w;
  noise.seed = seed;

  const EchoData b_clean = beamsteer_echo(target, grid, resolved, {});
  const EchoData b_noisy = beamsteer_echo(target, grid, resolved, noise);
  std::vector<unsigned char> looks(grid.size() * grid.size());
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      looks[r * grid.size() + c] = grid.inside(r, c) ? 1 : 0;
    }
  }
  const auto [b_peak, b_noise] = peak_and_noise(b_clean.samples, b_noisy.samples, looks);

  const EchoData s_clean = switched_echo(target, resolved, {});
  const EchoData s_noisy = switched_echo(target, resolved, noise);
  const std::vector<unsigned char> all(s_clean.samples.size(), 1);
  const auto [s_peak, s_noise] = peak_and_noise(s_clean.samples, s_noisy.samples, all);

  GainMeasurement out;
  out.beamsteer_snr_db = 10.0 * std::log10(b_peak / b_noise);
  out.switched_snr_db = 10.0 * std::log10(s_peak / s_noise);
  out.gain_db = out.beamsteer_snr_db - out.switched_snr_db;
  return out;
}

double far_field_distance(const ImagingConfig &config) {
  config.validate();
  const double side = static_cast<double>(config.n_antennas - 1) * config.spacing_m;
  const double diagonal2 = 2.0 * side * side;
  return 2.0 * diagonal2 / config.wavelength();
}

ImageError image_error(const Image &recon, const Scene &truth, int dilation) {
  const auto reflectors = truth.point_reflectors();
  if (reflectors.empty()) {
    throw AnalysisError("image_error: empty truth scene");
  }
  const std::size_t rows = recon.pixels.rows();
  const std::size_t cols = recon.pixels.cols();
  const RMatrix mag = magnitudes(recon);
  RMatrix truth_mag(rows, cols);
  for (const auto &ref : reflectors) {
    const double fc = std::round((ref.x - recon.origin.x) / recon.pitch_x);
    const double fr = std::round((ref.y - recon.origin.y) / recon.pitch_y);
    if (fc < 0 || fr < 0 || fc >= static_cast<double>(cols) || fr >= static_cast<double>(rows)) {
      throw AnalysisError("image_error: reconstruction does not cover the truth support");
    }
    truth_mag(static_cast<std::size_t>(fr), static_cast<std::size_t>(fc)) += std::abs(ref.amplitude);
  }
  const Peak peak = brightest_pixel(recon);
  if (!(peak.magnitude > 0.0)) {
    throw AnalysisError("image_error: reconstruction has no peak (all zero)");
  }

  ImageError err;
  err.peak_offset_m = std::numeric_limits<double>::infinity();
  const Position at = recon.pixel_position(peak.row, peak.col);
  for (const auto &ref : reflectors) {
    err.peak_offset_m = std::min(err.peak_offset_m, std::hypot(at.x - ref.x, at.y - ref.y));
  }

  const double truth_peak = *std::max_element(truth_mag.flat().begin(), truth_mag.flat().end());
  double sq = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double d = mag.flat()[i] / peak.magnitude - truth_mag.flat()[i] / truth_peak;
    sq += d * d;
  }
  err.normalized_rmse = std::sqrt(sq / static_cast<double>(mag.size()));

  std::vector<double> background;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      bool near_support = false;
      for (int dr = -dilation; dr <= dilation && !near_support; ++dr) {
        for (int dc = -dilation; dc <= dilation && !near_support; ++dc) {
          const long rr = static_cast<long>(r) + dr;
          const long cc = static_cast<long>(c) + dc;
          if (rr >= 0 && cc >= 0 && rr < static_cast<long>(rows) && cc < static_cast<long>(cols) &&
              truth_mag(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) > 0.0) {
            near_support = true;
          }
        }
      }
      if (!near_support) {
        background.push_back(mag(r, c));
      }
    }
  }
  if (background.empty()) {
    throw AnalysisError("image_error: no background pixels outside the truth support");
  }
  const std::size_t mid = background.size() / 2;
  std::nth_element(background.begin(), background.begin() + static_cast<long>(mid),
                   background.end());
  double median = background[mid];
  if (background.size() % 2 == 0) {
    const double lower = *std::max_element(background.begin(),
                                           background.begin() + static_cast<long>(mid));
    median = 0.5 * (median + lower);
  }
  err.peak_to_background_db = median > 0.0 ? 20.0 * std::log10(peak.magnitude / median)
                                           : std::numeric_limits<double>::infinity();
  return err;
}

std::vector<Peak> find_peaks(const Image &image) {
  const RMatrix mag = magnitudes(image);
  const auto rows = static_cast<long>(mag.rows());
  const auto cols = static_cast<long>(mag.cols());
  std::vector<Peak> peaks;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      const double v = mag(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      if (!(v > 0.0)) {
        continue;
      }
      bool is_max = true;
      for (long dr = -1; dr <= 1 && is_max; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          if ((dr == 0 && dc == 0) || r + dr < 0 || c + dc < 0 || r + dr >= rows ||
              c + dc >= cols) {
            continue;
          }
          const double w = mag(static_cast<std::size_t>(r + dr), static_cast<std::size_t>(c + dc));
          // Ties are resolved in raster order so a plateau yields one peak.
          const bool earlier = dr < 0 || (dr == 0 && dc < 0);
          if (w > v || (w == v && earlier)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) {
        peaks.push_back(make_peak(image, mag, static_cast<std::size_t>(r),
                                  static_cast<std::size_t>(c)));
      }
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak &a, const Peak &b) { return a.magnitude > b.magnitude; });
  return peaks;
}

Peak brightest_pixel(const Image &image) {
  const RMatrix mag = magnitudes(image);
  if (mag.empty()) {
    throw AnalysisError("empty image");
  }
  const auto it = std::max_element(mag.flat().begin(), mag.flat().end());
  const auto idx = static_cast<std::size_t>(it - mag.flat().begin());
  return make_peak(image, mag, idx / mag.cols(), idx % mag.cols());
}

PairMeasurement measure_pair(const Image &image) {
  const auto peaks = find_peaks(image);
  PairMeasurement out;
  if (peaks.empty()) {
    return out;
  }
  const double floor = peaks.front().magnitude * std::pow(10.0, -10.0 / 20.0);
  for (const auto &p : peaks) {
    if (p.magnitude >= floor) {
      ++out.peak_count;
    }
  }
  if (out.peak_count < 2) {
    return out;
  }
  const Peak &a = peaks[0];
  const Peak &b = peaks[1];
  out.separation_m = std::hypot(a.position.x - b.position.x, a.position.y - b.position.y);
  const RMatrix mag = magnitudes(image);
  double lowest = std::min(a.magnitude, b.magnitude);
  constexpr int kSteps = 64;
  for (int s = 1; s < kSteps; ++s) {
    const double t = static_cast<double>(s) / kSteps;
    const double row = (1 - t) * static_cast<double>(a.row) + t * static_cast<double>(b.row);
    const double col = (1 - t) * static_cast<double>(a.col) + t * static_cast<double>(b.col);
    lowest = std::min(lowest, sample_bilinear(mag, row, col));
  }
  out.dip_db = lowest > 0.0
                   ? 20.0 * std::log10(std::min(a.magnitude, b.magnitude) / lowest)
                   : std::numeric_limits<double>::infinity();
  return out;
}

} // namespace imgsim
