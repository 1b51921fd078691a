#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "imgsim/parallel.hpp"
#include "imgsim/random.hpp"

using namespace imgsim;

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("substreams are reproducible and distinct") {
  CounterRng a(42, Stream::TxPhase, 3, 7);
  CounterRng b(42, Stream::TxPhase, 3, 7);
  CounterRng c(42, Stream::RxPhase, 3, 7);
  CounterRng d(43, Stream::TxPhase, 3, 7);
  for (int i = 0; i < 100; ++i) {
    const double va = a.normal();
    CHECK(va == b.normal());
    CHECK(va != c.normal());
    CHECK(va != d.normal());
  }
}

TEST_CASE("distribution moments") {
  CounterRng rng(9, Stream::Test);
  constexpr int n = 200000;
  double su = 0.0;
  double sn = 0.0;
  double sn2 = 0.0;
  double sc2 = 0.0;
  double sre2 = 0.0;
  double u_min = 1.0;
  double u_max = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    su += u;
    const double g = rng.normal();
    sn += g;
    sn2 += g * g;
    const auto z = rng.complex_normal();
    sc2 += std::norm(z);
    sre2 += z.real() * z.real();
  }
  CHECK(u_min > 0.0);
  CHECK(u_max < 1.0);
  CHECK(std::abs(su / n - 0.5) < 0.005);
  CHECK(std::abs(sn / n) < 4.0 / std::sqrt(n));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sc2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sre2 / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto &h : hits) {
    CHECK(h.load() == 1);
  }
  parallel_for(0, [](std::size_t) { FAIL("called for empty range"); });
  CHECK_THROWS_AS(parallel_for(10,
                               [](std::size_t i) {
                                 if (i == 7) {
                                   throw std::runtime_error("boom");
                                 }
                               }),
                  std::runtime_error);
}

TEST_CASE("thread count honours IMGSIM_THREADS") {
  setenv("IMGSIM_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("IMGSIM_THREADS", "0", 1);
  CHECK(thread_count() >= 1);
  unsetenv("IMGSIM_THREADS");
  CHECK(thread_count() >= 1);
}
