#include "imgsim/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "imgsim/errors.hpp"

namespace imgsim {

namespace {

// Smallest of |v + L|, |v - L| over v in [lo, hi].
double min_edge_distance(double lo, double hi, double half_length) {
  auto g = [half_length](double v) {
    return std::min(std::abs(v + half_length), std::abs(v - half_length));
  };
  double best = std::min(g(lo), g(hi));
  for (double edge : {-half_length, half_length}) {
    if (edge >= lo && edge <= hi) {
      best = 0.0;
    }
  }
  return best;
}

} // namespace

void ImagingConfig::validate() const {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw InvalidConfig("frequency_hz must be positive");
  }
  if (n_antennas < 1) {
    throw InvalidConfig("n_antennas must be >= 1");
  }
  if (!(spacing_m > 0.0) || !std::isfinite(spacing_m)) {
    throw InvalidConfig("spacing_m must be positive");
  }
  if (!(z0_m > 0.0) || !std::isfinite(z0_m)) {
    throw InvalidConfig("z0_m must be positive");
  }
  if (zf_m && (!(*zf_m > 0.0) || !std::isfinite(*zf_m))) {
    throw InvalidConfig("zf_m must be positive");
  }
  if (theta_limit_rad &&
      !(*theta_limit_rad > 0.0 && *theta_limit_rad < std::numbers::pi / 2.0)) {
    throw InvalidConfig("theta_limit_rad must lie in (0, pi/2)");
  }
  if (!std::isfinite(amplitude_exponent)) {
    throw InvalidConfig("amplitude_exponent must be finite");
  }
  if (!(tx_amplitude > 0.0) || !std::isfinite(tx_amplitude)) {
    throw InvalidConfig("tx_amplitude must be positive");
  }
}

double ImagingConfig::wavelength() const { return kSpeedOfLight / frequency_hz; }

double ImagingConfig::wavenumber() const { return imgsim::wavenumber(frequency_hz); }

double ImagingConfig::half_length() const {
  return 0.5 * static_cast<double>(n_antennas - 1) * spacing_m;
}

Scene::Scene(std::vector<Reflector> reflectors) : content_(std::move(reflectors)) {
  for (const auto &r : std::get<std::vector<Reflector>>(content_)) {
    if (!std::isfinite(r.x) || !std::isfinite(r.y)) {
      throw InvalidConfig("reflector coordinates must be finite");
    }
  }
}

Scene::Scene(Raster raster) : content_(std::move(raster)) {
  const auto &r = std::get<Raster>(content_);
  if (!(r.pitch > 0.0)) {
    throw InvalidConfig("raster pitch must be positive");
  }
}

std::vector<Reflector> Scene::point_reflectors() const {
  if (const auto *list = std::get_if<std::vector<Reflector>>(&content_)) {
    return *list;
  }
  const auto &raster = std::get<Raster>(content_);
  std::vector<Reflector> out;
  for (std::size_t r = 0; r < raster.pixels.rows(); ++r) {
    for (std::size_t c = 0; c < raster.pixels.cols(); ++c) {
      const cdouble v = raster.pixels(r, c);
      if (v != cdouble{}) {
        out.push_back({raster.origin.x + static_cast<double>(c) * raster.pitch,
                       raster.origin.y + static_cast<double>(r) * raster.pitch, v});
      }
    }
  }
  return out;
}

bool Scene::empty() const { return point_reflectors().empty(); }

Bounds Scene::bounds() const {
  const auto pts = point_reflectors();
  if (pts.empty()) {
    throw AnalysisError("scene has no reflectors");
  }
  Bounds b{pts.front().x, pts.front().x, pts.front().y, pts.front().y};
  for (const auto &p : pts) {
    b.x_min = std::min(b.x_min, p.x);
    b.x_max = std::max(b.x_max, p.x);
    b.y_min = std::min(b.y_min, p.y);
    b.y_max = std::max(b.y_max, p.y);
  }
  return b;
}

Scene Scene::scaled(cdouble factor) const {
  if (const auto *list = std::get_if<std::vector<Reflector>>(&content_)) {
    auto copy = *list;
    for (auto &r : copy) {
      r.amplitude *= factor;
    }
    return Scene(std::move(copy));
  }
  auto raster = std::get<Raster>(content_);
  for (auto &v : raster.pixels.flat()) {
    v *= factor;
  }
  return Scene(std::move(raster));
}

SteeringGrid::SteeringGrid(std::size_t grid_size, double half_extent, double wavenumber)
    : half_extent_(half_extent), wavenumber_(wavenumber) {
  if (grid_size < 2) {
    throw InvalidConfig("grid_size must be >= 2");
  }
  const auto m = grid_size;
  spacing_ = 2.0 * half_extent / static_cast<double>(m - 1);
  axis_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    axis_[i] = -half_extent + static_cast<double>(i) * spacing_;
  }
  mask_.assign(m * m, 0);
  angles_.assign(m * m, LookAngles{});
  const double radius2 = half_extent * half_extent;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double kx = axis_[c];
      const double ky = axis_[r];
      if (kx * kx + ky * ky < radius2) {
        mask_[r * m + c] = 1;
        angles_[r * m + c] = angles_from_wavenumbers(kx, ky, wavenumber);
      }
    }
  }
}

std::size_t SteeringGrid::unmasked_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

double wavenumber(double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw InvalidConfig("frequency_hz must be positive");
  }
  return 2.0 * std::numbers::pi * frequency_hz / kSpeedOfLight;
}

std::vector<Position> aperture_positions(const ImagingConfig &config) {
  config.validate();
  const int n = config.n_antennas;
  const double centre = 0.5 * static_cast<double>(n - 1);
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      out.push_back({(static_cast<double>(ix) - centre) * config.spacing_m,
                     (static_cast<double>(iy) - centre) * config.spacing_m});
    }
  }
  return out;
}

cdouble steering_weight(Position element, double theta, double phi, double k) {
  const double s = std::sin(theta);
  const double phase = k * (element.x * s * std::cos(phi) + element.y * s * std::sin(phi));
  return std::polar(1.0, -phase);
}

Wavenumbers wavenumbers_from_angles(double theta, double phi, double k) {
  const double s = 2.0 * k * std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi)};
}

LookAngles angles_from_wavenumbers(double kx, double ky, double k) {
  const double radius = std::hypot(kx, ky);
  if (!(radius < 2.0 * k)) {
    throw OutsideSteerableDisk("wavenumber radius " + std::to_string(radius) +
                               " is not below 2k = " + std::to_string(2.0 * k));
  }
  LookAngles out;
  out.theta = std::asin(radius / (2.0 * k));
  out.phi = (kx == 0.0 && ky == 0.0) ? 0.0 : std::atan2(ky, kx);
  return out;
}

SteeringGrid build_steering_grid(const ImagingConfig &config, std::size_t grid_size) {
  config.validate();
  const double limit = config.theta_limit_rad.value_or(
      std::min(theta_max_for_target(0.0, 0.0, config), kMaxThetaLimit));
  if (!(limit > 0.0)) {
    throw InvalidConfig("theta_limit_rad resolves to zero (single-element aperture?)");
  }
  const double k = config.wavenumber();
  return SteeringGrid(grid_size, 2.0 * k * std::sin(limit), k);
}

double theta_max_for_target(double x, double y, const ImagingConfig &config) {
  const double l = config.half_length();
  const double gx = std::min(std::abs(x + l), std::abs(x - l)) / config.z0_m;
  const double gy = std::min(std::abs(y + l), std::abs(y - l)) / config.z0_m;
  return std::atan(std::sqrt(gx * gx + gy * gy));
}

double default_theta_limit(const ImagingConfig &config, const Bounds &box) {
  const double l = config.half_length();
  const double gx = min_edge_distance(box.x_min, box.x_max, l) / config.z0_m;
  const double gy = min_edge_distance(box.y_min, box.y_max, l) / config.z0_m;
  const double limit = std::min(std::atan(std::sqrt(gx * gx + gy * gy)), kMaxThetaLimit);
  if (!(limit > 0.0)) {
    throw InvalidConfig("theta_limit_rad: scene reaches the aperture edge; set it explicitly");
  }
  return limit;
}

std::size_t default_grid_size(int n_antennas) {
  std::size_t m = 2;
  const auto target = static_cast<std::size_t>(2 * std::max(n_antennas, 1));
  while (m < target) {
    m *= 2;
  }
  return m;
}

ImagingConfig resolve_theta_limit(const ImagingConfig &config, const Scene &scene) {
  ImagingConfig out = config;
  if (!out.theta_limit_rad) {
    out.theta_limit_rad = scene.empty() ? std::min(theta_max_for_target(0.0, 0.0, config),
                                                   kMaxThetaLimit)
                                        : default_theta_limit(config, scene.bounds());
  }
  return out;
}

} // namespace imgsim
