#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imgsim/matrix.hpp"
#include "imgsim/random.hpp"

namespace imgsim {

// RF non-idealities applied during acquisition.
struct ImpairmentSpec {
  std::optional<double> snr_db;  // nullopt: no receiver noise
  std::optional<int> phase_bits; // nullopt: infinite phase-shifter resolution
  double sigma_phi_rad = 0.0;
  double jitter_s = 0.0; // converted to sigma_phi at the carrier
  std::uint64_t seed = 0;
  // Use the same phase-noise draw for tx and rx at a given element and look.
  bool shared_tx_rx_phase_noise = false;
  // Absolute per-element noise variance; replaces the SNR-derived one.
  std::optional<double> noise_power_w;

  // Throws InvalidConfig naming the offending field.
  void validate() const;
  [[nodiscard]] double phase_sigma(double frequency_hz) const;
  [[nodiscard]] bool has_noise() const { return snr_db.has_value() || noise_power_w.has_value(); }
  [[nodiscard]] bool perturbs_weights(double frequency_hz) const {
    return phase_bits.has_value() || phase_sigma(frequency_hz) > 0.0;
  }
  // Per-sample noise variance for a given signal reference power.
  [[nodiscard]] double noise_variance(double signal_power_ref) const;

  bool operator==(const ImpairmentSpec &) const = default;
};

// Rounds the phase to the nearest of 2^bits levels 2 pi m / 2^bits; ties go
// to the lower level. Output has unit modulus.
[[nodiscard]] cdouble quantize_phase(cdouble weight, int bits);

// weight * exp(-j psi), psi ~ N(0, sigma^2).
[[nodiscard]] cdouble perturb_weight(cdouble weight, double sigma_phi, CounterRng &rng);

// Quantize, then perturb, as enabled in `spec`.
[[nodiscard]] cdouble impair_weight(cdouble weight, const ImpairmentSpec &spec,
                                    double sigma_phi, CounterRng &rng);

[[nodiscard]] double jitter_to_sigma(double frequency_hz, double jitter_s);

// Adds CN(0, sigma^2) with sigma^2 = ref / 10^(snr/10). nullopt snr: copy.
[[nodiscard]] std::vector<cdouble> add_awgn(std::span<const cdouble> samples,
                                            std::optional<double> snr_db,
                                            double signal_power_ref, CounterRng &rng);

} // namespace imgsim
