#include "imgsim/forward_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "imgsim/errors.hpp"
#include "imgsim/parallel.hpp"
#include "imgsim/random.hpp"

namespace imgsim {

namespace {

struct LookIndex {
  std::size_t row;
  std::size_t col;
};

std::vector<LookIndex> unmasked_looks(const SteeringGrid &grid) {
  std::vector<LookIndex> out;
  out.reserve(grid.unmasked_count());
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      if (grid.inside(r, c)) {
        out.push_back({r, c});
      }
    }
  }
  return out;
}

// exp(-j k r) from every element to every reflector; row per reflector.
CMatrix propagation(const std::vector<Reflector> &reflectors,
                    const std::vector<Position> &elements, double k, double z0) {
  CMatrix prop(reflectors.size(), elements.size());
  for (std::size_t i = 0; i < reflectors.size(); ++i) {
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const double dx = reflectors[i].x - elements[e].x;
      const double dy = reflectors[i].y - elements[e].y;
      prop(i, e) = std::polar(1.0, -k * std::sqrt(dx * dx + dy * dy + z0 * z0));
    }
  }
  return prop;
}

// Steering weights for one look, impaired per spec. Each look owns its own
// tx/rx substreams keyed by the lattice index.
void look_weights(const std::vector<Position> &elements, LookAngles look, double k,
                  const ImpairmentSpec &spec, double sigma, std::uint32_t look_id,
                  std::vector<cdouble> &tx, std::vector<cdouble> &rx) {
  const std::size_t n = elements.size();
  tx.resize(n);
  rx.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    tx[e] = steering_weight(elements[e], look.theta, look.phi, k);
  }
  if (!spec.phase_bits && sigma == 0.0) {
    rx = tx;
    return;
  }
  CounterRng tx_rng(spec.seed, Stream::TxPhase, look_id);
  CounterRng rx_rng(spec.seed, spec.shared_tx_rx_phase_noise ? Stream::TxPhase : Stream::RxPhase,
                    look_id);
  for (std::size_t e = 0; e < n; ++e) {
    const cdouble ideal = tx[e];
    tx[e] = impair_weight(ideal, spec, sigma, tx_rng);
    rx[e] = impair_weight(ideal, spec, sigma, rx_rng);
  }
}

void check_positive_grid(const SteeringGrid &grid) {
  if (grid.size() < 2) {
    throw DimensionMismatch("steering grid must have at least 2 points per axis");
  }
}

} // namespace

const char *to_string(EchoKind kind) {
  switch (kind) {
  case EchoKind::Beamsteered2d:
    return "beamsteered-2d";
  case EchoKind::Switched2d:
    return "switched-2d";
  case EchoKind::Beamsteered1d:
    return "beamsteered-1d";
  }
  return "unknown";
}

ThetaGrid1d build_theta_grid_1d(const ImagingConfig &config, std::size_t grid_size) {
  config.validate();
  if (grid_size < 2) {
    throw InvalidConfig("grid_size must be >= 2");
  }
  const double k = config.wavenumber();
  const double limit = config.theta_limit_rad.value_or(
      std::min(std::atan(config.half_length() / config.z0_m), kMaxThetaLimit));
  if (!(limit > 0.0)) {
    throw InvalidConfig("theta_limit_rad resolves to zero (single-element aperture?)");
  }
  const double extent = 2.0 * k * std::sin(limit);
  ThetaGrid1d grid;
  grid.k_start = -extent;
  grid.k_step = 2.0 * extent / static_cast<double>(grid_size - 1);
  grid.theta.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    grid.theta[i] = std::asin(grid.k_at(i) / (2.0 * k));
  }
  return grid;
}

std::vector<double> linear_positions(const ImagingConfig &config) {
  const double centre = 0.5 * static_cast<double>(config.n_antennas - 1);
  std::vector<double> out(static_cast<std::size_t>(config.n_antennas));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (static_cast<double>(i) - centre) * config.spacing_m;
  }
  return out;
}

cdouble transmit_field(Position point, [[maybe_unused]] double theta,
                       [[maybe_unused]] double phi, const ImagingConfig &config,
                       std::span<const cdouble> weights) {
  const auto elements = aperture_positions(config);
  if (weights.size() != elements.size()) {
    throw DimensionMismatch("expected " + std::to_string(elements.size()) + " weights, got " +
                            std::to_string(weights.size()));
  }
  const double k = config.wavenumber();
  const double z0 = config.z0_m;
  cdouble sum{};
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const double dx = point.x - elements[e].x;
    const double dy = point.y - elements[e].y;
    sum += std::polar(1.0, -k * std::sqrt(dx * dx + dy * dy + z0 * z0)) * weights[e];
  }
  return config.beamsteer_element_amplitude() * sum;
}

EchoData beamsteer_echo(const Scene &scene, const SteeringGrid &grid,
                        const ImagingConfig &config, const ImpairmentSpec &impairments) {
  config.validate();
  impairments.validate();
  check_positive_grid(grid);
  const std::size_t m = grid.size();
  EchoData echo{EchoKind::Beamsteered2d, CMatrix(m, m), grid.axis().front(), grid.spacing()};

  const auto reflectors = scene.point_reflectors();
  const auto elements = aperture_positions(config);
  const std::size_t n_elem = elements.size();
  const double k = config.wavenumber();
  const double amp = config.beamsteer_element_amplitude();
  const double sigma = impairments.phase_sigma(config.frequency_hz);
  const CMatrix prop = propagation(reflectors, elements, k, config.z0_m);
  const auto looks = unmasked_looks(grid);
  std::vector<double> look_power(looks.size(), 0.0);

  parallel_for(looks.size(), [&](std::size_t li) {
    const auto [row, col] = looks[li];
    const auto look_id = static_cast<std::uint32_t>(row * m + col);
    std::vector<cdouble> tx;
    std::vector<cdouble> rx;
    look_weights(elements, grid.angles(row, col), k, impairments, sigma, look_id, tx, rx);
    // Noiseless per-receive-element signal, then receive combining.
    std::vector<cdouble> received(n_elem, cdouble{});
    for (std::size_t i = 0; i < reflectors.size(); ++i) {
      const cdouble *p = &prop(i, 0);
      cdouble field{};
      for (std::size_t e = 0; e < n_elem; ++e) {
        field += p[e] * tx[e];
      }
      const cdouble scale = reflectors[i].amplitude * amp * field;
      for (std::size_t e = 0; e < n_elem; ++e) {
        received[e] += scale * p[e];
      }
    }
    cdouble combined{};
    double power = 0.0;
    for (std::size_t e = 0; e < n_elem; ++e) {
      combined += rx[e] * received[e];
      power += std::norm(received[e]);
    }
    echo.samples(row, col) = combined;
    look_power[li] = power;
  });

  if (!impairments.has_noise() || looks.empty()) {
    return echo;
  }
  const double total_power = std::accumulate(look_power.begin(), look_power.end(), 0.0);
  const double reference = total_power / static_cast<double>(looks.size() * n_elem);
  const double std_dev = std::sqrt(impairments.noise_variance(reference));
  if (std_dev == 0.0) {
    return echo;
  }
  parallel_for(looks.size(), [&](std::size_t li) {
    const auto [row, col] = looks[li];
    const auto look_id = static_cast<std::uint32_t>(row * m + col);
    std::vector<cdouble> tx;
    std::vector<cdouble> rx;
    look_weights(elements, grid.angles(row, col), k, impairments, sigma, look_id, tx, rx);
    CounterRng noise(impairments.seed, Stream::Awgn, look_id);
    cdouble combined{};
    for (std::size_t e = 0; e < n_elem; ++e) {
      combined += rx[e] * (std_dev * noise.complex_normal());
    }
    echo.samples(row, col) += combined;
  });
  return echo;
}

EchoData ideal_echo(const Scene &scene, const SteeringGrid &grid, const ImagingConfig &config) {
  config.validate();
  check_positive_grid(grid);
  const std::size_t m = grid.size();
  EchoData echo{EchoKind::Beamsteered2d, CMatrix(m, m), grid.axis().front(), grid.spacing()};
  const auto reflectors = scene.point_reflectors();
  const double k = config.wavenumber();
  const double p = config.amplitude_exponent;
  const double z0 = config.z0_m;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (!grid.inside(r, c)) {
        continue;
      }
      const auto look = grid.angles(r, c);
      const double cos_t = std::cos(look.theta);
      if (cos_t < 1e-6) {
        throw GrazingAngle("look at theta = " + std::to_string(look.theta) +
                           " rad is too close to grazing");
      }
      const double u = std::sin(look.theta) * std::cos(look.phi);
      const double v = std::sin(look.theta) * std::sin(look.phi);
      cdouble sum{};
      for (const auto &ref : reflectors) {
        sum += ref.amplitude * std::polar(1.0, -2.0 * k * (ref.x * u + ref.y * v + z0 * cos_t));
      }
      echo.samples(r, c) = std::pow(k * cos_t, -p) * sum;
    }
  }
  return echo;
}

EchoData switched_echo(const Scene &scene, const ImagingConfig &config,
                       const ImpairmentSpec &impairments) {
  config.validate();
  impairments.validate();
  const auto n = static_cast<std::size_t>(config.n_antennas);
  EchoData echo{EchoKind::Switched2d, CMatrix(n, n), -config.half_length(), config.spacing_m};
  const auto reflectors = scene.point_reflectors();
  const auto elements = aperture_positions(config);
  const double k = config.wavenumber();
  const double z0 = config.z0_m;
  auto flat = echo.samples.flat();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    cdouble sum{};
    for (const auto &ref : reflectors) {
      const double dx = elements[e].x - ref.x;
      const double dy = elements[e].y - ref.y;
      sum += ref.amplitude * std::polar(1.0, -2.0 * k * std::sqrt(dx * dx + dy * dy + z0 * z0));
    }
    flat[e] = config.tx_amplitude * sum;
  }
  if (!impairments.has_noise()) {
    return echo;
  }
  double power = 0.0;
  for (const auto &v : flat) {
    power += std::norm(v);
  }
  const double reference = power / static_cast<double>(flat.size());
  const double std_dev = std::sqrt(impairments.noise_variance(reference));
  for (std::size_t e = 0; e < flat.size(); ++e) {
    CounterRng noise(impairments.seed, Stream::Awgn, static_cast<std::uint32_t>(e));
    flat[e] += std_dev * noise.complex_normal();
  }
  return echo;
}

EchoData beamsteer_echo_1d(std::span<const Reflector1d> scene, const ThetaGrid1d &theta_grid,
                           const ImagingConfig &config, double sigma_phi, std::uint64_t seed,
                           std::uint32_t trial) {
  config.validate();
  const std::size_t m = theta_grid.size();
  EchoData echo{EchoKind::Beamsteered1d, CMatrix(1, m), theta_grid.k_start, theta_grid.k_step};
  const auto xs = linear_positions(config);
  const std::size_t n = xs.size();
  const double k = config.wavenumber();
  const double z0 = config.z0_m;

  CMatrix prop(scene.size(), n);
  for (std::size_t i = 0; i < scene.size(); ++i) {
    for (std::size_t e = 0; e < n; ++e) {
      const double dx = scene[i].x - xs[e];
      prop(i, e) = std::polar(1.0, -k * std::sqrt(dx * dx + z0 * z0));
    }
  }
  std::vector<cdouble> tx(n);
  std::vector<cdouble> rx(n);
  for (std::size_t l = 0; l < m; ++l) {
    const double s = std::sin(theta_grid.theta[l]);
    CounterRng tx_rng(seed, Stream::TxPhase, static_cast<std::uint32_t>(l), trial);
    CounterRng rx_rng(seed, Stream::RxPhase, static_cast<std::uint32_t>(l), trial);
    for (std::size_t e = 0; e < n; ++e) {
      const cdouble w = std::polar(1.0, -k * xs[e] * s);
      tx[e] = perturb_weight(w, sigma_phi, tx_rng);
      rx[e] = perturb_weight(w, sigma_phi, rx_rng);
    }
    cdouble total{};
    for (std::size_t i = 0; i < scene.size(); ++i) {
      cdouble t{};
      cdouble r{};
      for (std::size_t e = 0; e < n; ++e) {
        t += prop(i, e) * tx[e];
        r += prop(i, e) * rx[e];
      }
      total += scene[i].amplitude * t * r;
    }
    echo.samples(0, l) = total;
  }
  return echo;
}

} // namespace imgsim
