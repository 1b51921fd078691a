#include "imgsim/reconstruction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "imgsim/errors.hpp"
#include "imgsim/spectral.hpp"

namespace imgsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Signed DFT index for bin u of a length-n transform.
long signed_bin(std::size_t u, std::size_t n) {
  const auto s = static_cast<long>(u);
  return u < (n + 1) / 2 ? s : s - static_cast<long>(n);
}

std::size_t wrap(long v, std::size_t n) {
  const auto m = static_cast<long>(n);
  return static_cast<std::size_t>(((v % m) + m) % m);
}

void check_switched(const EchoData &echo, const ImagingConfig &config) {
  const auto n = static_cast<std::size_t>(config.n_antennas);
  if (echo.kind != EchoKind::Switched2d) {
    throw DimensionMismatch(std::string("expected switched-2d echo, got ") + to_string(echo.kind));
  }
  if (echo.samples.rows() != n || echo.samples.cols() != n) {
    throw DimensionMismatch("switched echo must be " + std::to_string(n) + "x" +
                            std::to_string(n));
  }
}

CMatrix zero_pad(const CMatrix &src, std::size_t size) {
  CMatrix out(size, size);
  for (std::size_t r = 0; r < src.rows(); ++r) {
    for (std::size_t c = 0; c < src.cols(); ++c) {
      out(r, c) = src(r, c);
    }
  }
  return out;
}

// Lag window shared by both switched reconstructions.
long first_lag(int n_antennas) { return -static_cast<long>(n_antennas / 2); }

} // namespace

Image reconstruct_beamsteer(const EchoData &echo, const SteeringGrid &grid,
                            const ImagingConfig &config, double z_f) {
  config.validate();
  const std::size_t m = grid.size();
  if (echo.kind != EchoKind::Beamsteered2d) {
    throw DimensionMismatch(std::string("expected beamsteered-2d echo, got ") +
                            to_string(echo.kind));
  }
  if (echo.samples.rows() != m || echo.samples.cols() != m ||
      !close(echo.axis_start, grid.axis().front()) || !close(echo.axis_step, grid.spacing())) {
    throw DimensionMismatch("echo does not match the steering grid");
  }
  const double k = config.wavenumber();
  const double p = config.amplitude_exponent;
  CMatrix spectrum(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (!grid.inside(r, c)) {
        continue;
      }
      const double cos_t = std::cos(grid.angles(r, c).theta);
      spectrum(r, c) = echo.samples(r, c) * std::pow(k * cos_t, p) *
                       std::polar(1.0, 2.0 * k * z_f * cos_t);
    }
  }
  const CMatrix raw = idft2(spectrum);

  Image img;
  img.pitch_x = img.pitch_y = kTwoPi / (static_cast<double>(m) * grid.spacing());
  const long half = static_cast<long>(m / 2);
  img.origin = {-static_cast<double>(half) * img.pitch_x, -static_cast<double>(half) * img.pitch_y};
  img.provenance = "beamsteer";
  img.pixels = CMatrix(m, m);
  // The lattice starts at k0 = -K rather than 0, which leaves a unit-modulus
  // phase ramp exp(j k0 (x + y)) on top of the plain inverse transform.
  const double k0 = grid.axis().front();
  for (std::size_t r = 0; r < m; ++r) {
    const long ly = static_cast<long>(r) - half;
    for (std::size_t c = 0; c < m; ++c) {
      const long lx = static_cast<long>(c) - half;
      const auto pos = img.pixel_position(r, c);
      img.pixels(r, c) = std::polar(1.0, k0 * (pos.x + pos.y)) * raw(wrap(ly, m), wrap(lx, m));
    }
  }
  return img;
}

CMatrix impulse_response(const ImagingConfig &config, double z_f) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.n_antennas);
  const auto elements = aperture_positions(config);
  const double k = config.wavenumber();
  CMatrix h(n, n);
  auto flat = h.flat();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const double r = std::sqrt(elements[e].x * elements[e].x + elements[e].y * elements[e].y +
                               z_f * z_f);
    flat[e] = std::polar(1.0, -2.0 * k * r);
  }
  return h;
}

std::size_t switched_padded_size(int n_antennas) {
  std::size_t p = 1;
  while (p < static_cast<std::size_t>(2 * n_antennas - 1)) {
    p *= 2;
  }
  return p;
}

Image reconstruct_switched_mf(const EchoData &echo, const ImagingConfig &config, double z_f) {
  config.validate();
  check_switched(echo, config);
  const auto n = static_cast<std::size_t>(config.n_antennas);
  const std::size_t size = switched_padded_size(config.n_antennas);
  const CMatrix s_hat = dft2(zero_pad(echo.samples, size));
  const CMatrix h_hat = dft2(zero_pad(impulse_response(config, z_f), size));
  CMatrix product(size, size);
  for (std::size_t i = 0; i < product.size(); ++i) {
    product.flat()[i] = s_hat.flat()[i] * std::conj(h_hat.flat()[i]);
  }
  const CMatrix corr = idft2(product);

  Image img;
  img.pitch_x = img.pitch_y = config.spacing_m;
  const long lag0 = first_lag(config.n_antennas);
  img.origin = {static_cast<double>(lag0) * config.spacing_m,
                static_cast<double>(lag0) * config.spacing_m};
  img.provenance = "switched-mf";
  img.pixels = CMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      img.pixels(r, c) = corr(wrap(lag0 + static_cast<long>(r), size),
                              wrap(lag0 + static_cast<long>(c), size));
    }
  }
  return img;
}

Image reconstruct_switched_spectral(const EchoData &echo, const ImagingConfig &config,
                                    double z_f) {
  config.validate();
  check_switched(echo, config);
  const auto n = static_cast<std::size_t>(config.n_antennas);
  const std::size_t size = switched_padded_size(config.n_antennas);
  const double dx = config.spacing_m;
  const double two_k = 2.0 * config.wavenumber();
  const long lag0 = first_lag(config.n_antennas);
  // Sample 0 of the echo sits at -L; output pixel 0 sits at lag0 * dx.
  const double shift = config.half_length() + static_cast<double>(lag0) * dx;

  CMatrix spectrum = dft2(zero_pad(echo.samples, size));
  const double dk = kTwoPi / (static_cast<double>(size) * dx);
  for (std::size_t r = 0; r < size; ++r) {
    const double ky = dk * static_cast<double>(signed_bin(r, size));
    for (std::size_t c = 0; c < size; ++c) {
      const double kx = dk * static_cast<double>(signed_bin(c, size));
      const double kz2 = two_k * two_k - kx * kx - ky * ky;
      if (!(kz2 > 0.0)) {
        spectrum(r, c) = {};
        continue;
      }
      const double kz = std::sqrt(kz2);
      spectrum(r, c) *= std::polar(1.0 / kz, kz * z_f + (kx + ky) * shift);
    }
  }
  const CMatrix field = idft2(spectrum);

  Image img;
  img.pitch_x = img.pitch_y = dx;
  img.origin = {static_cast<double>(lag0) * dx, static_cast<double>(lag0) * dx};
  img.provenance = "switched-spectral";
  img.pixels = CMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      img.pixels(r, c) = field(r, c);
    }
  }
  return img;
}

Profile reconstruct_1d(const EchoData &echo, const ThetaGrid1d &theta_grid,
                       const ImagingConfig &config, double z_f, std::size_t oversample) {
  config.validate();
  const std::size_t m = theta_grid.size();
  if (echo.kind != EchoKind::Beamsteered1d || echo.samples.rows() != 1 ||
      echo.samples.cols() != m) {
    throw DimensionMismatch("echo does not match the 1D theta grid");
  }
  if (oversample < 1) {
    throw InvalidConfig("oversample must be >= 1");
  }
  const double k = config.wavenumber();
  const double extent = std::max(std::abs(theta_grid.k_start), 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double kx = 2.0 * k * std::sin(theta_grid.theta[i]);
    if (std::abs(kx - theta_grid.k_at(i)) > 1e-9 * extent) {
      throw InvalidConfig("theta grid is not uniform in 2k sin(theta)");
    }
  }
  const std::size_t total = m * oversample;
  std::vector<cdouble> spectrum(total);
  const double p = config.amplitude_exponent;
  for (std::size_t i = 0; i < m; ++i) {
    const double cos_t = std::cos(theta_grid.theta[i]);
    spectrum[i] = echo.samples(0, i) * std::pow(k * cos_t, p) *
                  std::polar(1.0, 2.0 * k * z_f * cos_t);
  }
  const auto raw = idft(spectrum);

  Profile out;
  out.pitch = kTwoPi / (static_cast<double>(total) * theta_grid.k_step);
  const long half = static_cast<long>(total / 2);
  out.origin = -static_cast<double>(half) * out.pitch;
  out.values.resize(total);
  // Keep the amplitude independent of the oversampling factor.
  const double scale = static_cast<double>(total) / static_cast<double>(m);
  for (std::size_t n = 0; n < total; ++n) {
    const long lx = static_cast<long>(n) - half;
    out.values[n] = scale * std::polar(1.0, theta_grid.k_start * out.position(n)) *
                    raw[wrap(lx, total)];
  }
  return out;
}

} // namespace imgsim
