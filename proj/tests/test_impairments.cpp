#include <doctest.h>

#include <cmath>
#include <numbers>

#include "imgsim/errors.hpp"
#include "imgsim/impairments.hpp"

using namespace imgsim;
using std::numbers::pi;

TEST_CASE("quantize_phase") {
  CounterRng rng(1, Stream::Test);
  for (int i = 0; i < 1000; ++i) {
    const cdouble w = std::polar(1.0, (rng.uniform() - 0.5) * 2.0 * pi);
    const cdouble q = quantize_phase(w, 1);
    CHECK((q == cdouble{1.0, 0.0} || q == cdouble{-1.0, 0.0}));
  }
  CHECK(quantize_phase(std::polar(1.0, 0.30), 2) == cdouble{1.0, 0.0});
  CHECK(quantize_phase({0.0, 1.0}, 2) == cdouble{0.0, 1.0});
  CHECK(quantize_phase({-1.0, 0.0}, 3) == cdouble{-1.0, 0.0});
  const cdouble on_level = std::polar(1.0, pi / 4.0);
  CHECK(std::abs(quantize_phase(on_level, 3) - on_level) < 1e-15);
  // Ties go to the lower level.
  CHECK(quantize_phase(std::polar(1.0, pi / 4.0), 2) == cdouble{1.0, 0.0});
  CHECK(quantize_phase(std::polar(1.0, 3.0 * pi / 4.0), 2) == cdouble{0.0, 1.0});
  // Negative phases wrap onto the level set.
  CHECK(quantize_phase(std::polar(1.0, -0.1), 1) == cdouble{1.0, 0.0});
  CHECK(quantize_phase(std::polar(1.0, -1.7), 2) == cdouble{0.0, -1.0});
}

TEST_CASE("quantize_phase error bound and convergence") {
  CounterRng rng(2, Stream::Test);
  for (int bits = 1; bits <= 12; ++bits) {
    const double bound = pi / std::pow(2.0, bits);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const cdouble w = std::polar(1.0, (rng.uniform() - 0.5) * 2.0 * pi);
      const cdouble q = quantize_phase(w, bits);
      CHECK(std::abs(std::abs(q) - 1.0) < 1e-15);
      const double err = std::abs(std::arg(q * std::conj(w)));
      worst = std::max(worst, err);
      CHECK(err <= bound + 1e-12);
    }
    if (bits == 12) {
      CHECK(worst < 1e-3);
    }
  }
}

TEST_CASE("perturb_weight statistics") {
  CounterRng rng(3, Stream::Test);
  const cdouble w = std::polar(1.0, 0.4);
  CHECK(perturb_weight(w, 0.0, rng) == w);
  constexpr int n = 100000;
  const double sigma = 0.7;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const cdouble p = perturb_weight(w, sigma, rng);
    CHECK(std::abs(std::abs(p) - 1.0) < 1e-14);
    const double psi = -std::arg(p * std::conj(w));
    sum += psi;
    sum2 += psi * psi;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(static_cast<double>(n)));
  CHECK(sd == doctest::Approx(sigma).epsilon(0.02));
}

TEST_CASE("impair_weight quantizes then perturbs") {
  ImpairmentSpec spec;
  spec.phase_bits = 1;
  CounterRng a(4, Stream::Test);
  CounterRng b(4, Stream::Test);
  const cdouble w = std::polar(1.0, 2.0);
  const cdouble got = impair_weight(w, spec, 0.3, a);
  const cdouble want = perturb_weight(quantize_phase(w, 1), 0.3, b);
  CHECK(got == want);
}

TEST_CASE("jitter_to_sigma") {
  CHECK(jitter_to_sigma(60e9, 3e-12) == doctest::Approx(1.1310).epsilon(5e-5));
  CHECK(jitter_to_sigma(60e9, 0.0) == 0.0);
  CHECK(jitter_to_sigma(1e9, 1e-9) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  ImpairmentSpec spec;
  spec.jitter_s = 3e-12;
  CHECK(spec.phase_sigma(60e9) == doctest::Approx(1.1310).epsilon(5e-5));
}

TEST_CASE("add_awgn") {
  std::vector<cdouble> x(100000, cdouble{0.5, -0.25});
  CounterRng rng(5, Stream::Test);
  const auto same = add_awgn(x, std::nullopt, 1.0, rng);
  CHECK(same == x);
  const double ref = 2.0;
  const auto y = add_awgn(x, -50.0, ref, rng);
  REQUIRE(y.size() == x.size());
  double p = 0.0;
  double pre = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    p += std::norm(y[i] - x[i]);
    pre += std::pow((y[i] - x[i]).real(), 2);
  }
  const double want = ref / std::pow(10.0, -5.0);
  CHECK(p / x.size() == doctest::Approx(want).epsilon(0.02));
  CHECK(pre / x.size() == doctest::Approx(want / 2.0).epsilon(0.02));
  CHECK_THROWS_AS((void)add_awgn(x, 10.0, 0.0, rng), InvalidConfig);
}

TEST_CASE("impairment spec validation") {
  ImpairmentSpec s;
  CHECK_NOTHROW(s.validate());
  CHECK_FALSE(s.has_noise());
  s.phase_bits = 0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("phase_bits"), InvalidConfig);
  s = {};
  s.sigma_phi_rad = 0.1;
  s.jitter_s = 1e-12;
  CHECK_THROWS_AS(s.validate(), InvalidConfig);
  s = {};
  s.sigma_phi_rad = -1.0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("sigma_phi_rad"), InvalidConfig);
  s = {};
  s.snr_db = 10.0;
  CHECK(s.noise_variance(5.0) == doctest::Approx(0.5));
  s.noise_power_w = 3.0;
  CHECK(s.noise_variance(5.0) == 3.0);
}
