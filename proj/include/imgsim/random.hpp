#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace imgsim {

// Philox4x32-10 block: 128-bit counter, 64-bit key.
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key);

// Substream tags; one per independent source of randomness.
enum class Stream : std::uint32_t {
  TxPhase = 1,
  RxPhase = 2,
  Awgn = 3,
  Test = 0xFFFF,
};

// Counter-based generator. The (seed, stream, a, b) tuple selects a substream;
// draws advance a private counter, so results never depend on which thread
// evaluates which substream or in what order.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint32_t a = 0, std::uint32_t b = 0);

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double normal();
  // Circularly symmetric, E|z|^2 = 1.
  std::complex<double> complex_normal();

private:
  std::array<std::uint32_t, 4> next_block();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 3> prefix_;
  std::uint32_t index_ = 0;
};

} // namespace imgsim
