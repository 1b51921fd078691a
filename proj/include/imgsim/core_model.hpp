#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "imgsim/matrix.hpp"

namespace imgsim {

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s, exact

// Steering elevation is never allowed past this, whatever the scene asks for.
inline constexpr double kMaxThetaLimit = 85.0 * 3.14159265358979323846 / 180.0;

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position &) const = default;
};

struct LookAngles {
  double theta = 0.0; // elevation from broadside (rad)
  double phi = 0.0;   // azimuth in (-pi, pi] (rad)
};

struct Wavenumbers {
  double kx = 0.0;
  double ky = 0.0;
};

// Array geometry and carrier. Derived quantities are recomputed on demand.
struct ImagingConfig {
  double frequency_hz = 0.0;
  int n_antennas = 0;
  double spacing_m = 0.0;
  double z0_m = 0.0;
  std::optional<double> zf_m;            // focus distance, defaults to z0
  std::optional<double> theta_limit_rad; // defaults from the scene extent
  double amplitude_exponent = 1.0;       // p in the (k cos theta)^p factor
  double tx_amplitude = 1.0;             // switched per-measurement amplitude A_s

  // Throws InvalidConfig naming the offending field.
  void validate() const;

  [[nodiscard]] double wavelength() const;
  [[nodiscard]] double wavenumber() const;
  [[nodiscard]] double half_length() const; // L = (N_a - 1)/2 * spacing
  [[nodiscard]] double focus() const { return zf_m.value_or(z0_m); }

  // Per-element amplitude under beam steering: N_a^2 * A_b^2 == A_s^2.
  [[nodiscard]] double beamsteer_element_amplitude() const {
    return tx_amplitude / static_cast<double>(n_antennas);
  }

  bool operator==(const ImagingConfig &) const = default;
};

struct Reflector {
  double x = 0.0;
  double y = 0.0;
  cdouble amplitude{1.0, 0.0};
};

// Raster reflectivity; origin is the centre of pixel (0, 0), rows step in y.
struct Raster {
  CMatrix pixels;
  double pitch = 0.0;
  Position origin;
};

struct Bounds {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

class Scene {
public:
  Scene() = default;
  explicit Scene(std::vector<Reflector> reflectors);
  explicit Scene(Raster raster);

  [[nodiscard]] bool is_raster() const {
    return std::holds_alternative<Raster>(content_);
  }
  // Raster scenes expand to one reflector per nonzero pixel, at pixel centres.
  [[nodiscard]] std::vector<Reflector> point_reflectors() const;
  [[nodiscard]] bool empty() const;
  // Throws AnalysisError for an empty scene.
  [[nodiscard]] Bounds bounds() const;

  [[nodiscard]] Scene scaled(cdouble factor) const;

private:
  std::variant<std::vector<Reflector>, Raster> content_;
};

// Uniform (kx, ky) lattice over [-K, K]^2 with the steerable-disk mask.
// Row index selects ky, column index selects kx; both share one axis.
class SteeringGrid {
public:
  SteeringGrid(std::size_t grid_size, double half_extent, double wavenumber);

  [[nodiscard]] std::size_t size() const { return axis_.size(); }
  [[nodiscard]] double half_extent() const { return half_extent_; }
  [[nodiscard]] double spacing() const { return spacing_; }
  [[nodiscard]] double wavenumber() const { return wavenumber_; }
  [[nodiscard]] const std::vector<double> &axis() const { return axis_; }

  [[nodiscard]] double kx(std::size_t col) const { return axis_[col]; }
  [[nodiscard]] double ky(std::size_t row) const { return axis_[row]; }
  [[nodiscard]] bool inside(std::size_t row, std::size_t col) const {
    return mask_[row * size() + col] != 0;
  }
  // Only meaningful for unmasked points; masked points hold (0, 0).
  [[nodiscard]] LookAngles angles(std::size_t row, std::size_t col) const {
    return angles_[row * size() + col];
  }
  [[nodiscard]] std::size_t unmasked_count() const;

private:
  double half_extent_;
  double spacing_;
  double wavenumber_;
  std::vector<double> axis_;
  std::vector<unsigned char> mask_;
  std::vector<LookAngles> angles_;
};

// k = 2 pi f / c. Throws InvalidConfig for f <= 0.
[[nodiscard]] double wavenumber(double frequency_hz);

// N_a^2 positions on the centred grid; row-major with y outer, x inner.
[[nodiscard]] std::vector<Position> aperture_positions(const ImagingConfig &config);

// exp(-j k (a sin(theta) cos(phi) + b sin(theta) sin(phi)))
[[nodiscard]] cdouble steering_weight(Position element, double theta, double phi, double k);

[[nodiscard]] Wavenumbers wavenumbers_from_angles(double theta, double phi, double k);

// Inverse of wavenumbers_from_angles. phi uses atan2 and is 0 at the origin.
// Throws OutsideSteerableDisk when sqrt(kx^2 + ky^2) >= 2k.
[[nodiscard]] LookAngles angles_from_wavenumbers(double kx, double ky, double k);

// Uses config.theta_limit_rad when set, otherwise the limit for a target at
// the array axis. Throws InvalidConfig for grid_size < 2.
[[nodiscard]] SteeringGrid build_steering_grid(const ImagingConfig &config,
                                               std::size_t grid_size);

[[nodiscard]] double theta_max_for_target(double x, double y, const ImagingConfig &config);

// min(theta_max_for_target over the box, 85 deg). Throws InvalidConfig when
// the box reaches the aperture edge and the limit collapses to zero.
[[nodiscard]] double default_theta_limit(const ImagingConfig &config, const Bounds &box);

// 2 * N_a rounded up to a power of two.
[[nodiscard]] std::size_t default_grid_size(int n_antennas);

// Copy of config with theta_limit_rad filled from the scene when unset.
[[nodiscard]] ImagingConfig resolve_theta_limit(const ImagingConfig &config, const Scene &scene);

} // namespace imgsim
