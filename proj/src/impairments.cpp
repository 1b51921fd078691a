#include "imgsim/impairments.hpp"

#include <cmath>
#include <numbers>

#include "imgsim/errors.hpp"

namespace imgsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cdouble unit_at_level(std::int64_t level, std::int64_t levels) {
  // Quarter-turn levels are returned exactly so 1- and 2-bit outputs are
  // exactly +-1 and +-j.
  if ((4 * level) % levels == 0) {
    switch ((4 * level / levels) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
    }
  }
  return std::polar(1.0, kTwoPi * static_cast<double>(level) / static_cast<double>(levels));
}

} // namespace

void ImpairmentSpec::validate() const {
  if (snr_db && !std::isfinite(*snr_db)) {
    throw InvalidConfig("snr_db must be finite or off");
  }
  if (phase_bits && (*phase_bits < 1 || *phase_bits > 30)) {
    throw InvalidConfig("phase_bits must be in [1, 30] or infinite");
  }
  if (!(sigma_phi_rad >= 0.0) || !std::isfinite(sigma_phi_rad)) {
    throw InvalidConfig("sigma_phi_rad must be >= 0");
  }
  if (!(jitter_s >= 0.0) || !std::isfinite(jitter_s)) {
    throw InvalidConfig("jitter_s must be >= 0");
  }
  if (sigma_phi_rad > 0.0 && jitter_s > 0.0) {
    throw InvalidConfig("jitter_s: set either sigma_phi_rad or jitter_s, not both");
  }
  if (noise_power_w && !(*noise_power_w >= 0.0)) {
    throw InvalidConfig("noise_power_w must be >= 0");
  }
}

double ImpairmentSpec::phase_sigma(double frequency_hz) const {
  return jitter_s > 0.0 ? jitter_to_sigma(frequency_hz, jitter_s) : sigma_phi_rad;
}

double ImpairmentSpec::noise_variance(double signal_power_ref) const {
  if (noise_power_w) {
    return *noise_power_w;
  }
  if (!snr_db) {
    return 0.0;
  }
  return signal_power_ref / std::pow(10.0, *snr_db / 10.0);
}

cdouble quantize_phase(cdouble weight, int bits) {
  const std::int64_t levels = std::int64_t{1} << bits;
  double phase = std::arg(weight);
  if (phase < 0.0) {
    phase += kTwoPi;
  }
  const double step = kTwoPi / static_cast<double>(levels);
  auto level = static_cast<std::int64_t>(std::ceil(phase / step - 0.5));
  level %= levels;
  return unit_at_level(level, levels);
}

cdouble perturb_weight(cdouble weight, double sigma_phi, CounterRng &rng) {
  if (sigma_phi == 0.0) {
    return weight;
  }
  const double psi = sigma_phi * rng.normal();
  return weight * std::polar(1.0, -psi);
}

cdouble impair_weight(cdouble weight, const ImpairmentSpec &spec, double sigma_phi,
                      CounterRng &rng) {
  if (spec.phase_bits) {
    weight = quantize_phase(weight, *spec.phase_bits);
  }
  return perturb_weight(weight, sigma_phi, rng);
}

double jitter_to_sigma(double frequency_hz, double jitter_s) {
  return kTwoPi * frequency_hz * jitter_s;
}

std::vector<cdouble> add_awgn(std::span<const cdouble> samples, std::optional<double> snr_db,
                              double signal_power_ref, CounterRng &rng) {
  std::vector<cdouble> out(samples.begin(), samples.end());
  if (!snr_db) {
    return out;
  }
  if (!(signal_power_ref > 0.0)) {
    throw InvalidConfig("signal_power_ref must be positive");
  }
  const double sigma = std::sqrt(signal_power_ref / std::pow(10.0, *snr_db / 10.0));
  for (auto &v : out) {
    v += sigma * rng.complex_normal();
  }
  return out;
}

} // namespace imgsim
