#include <doctest.h>

#include <cmath>
#include <numbers>

#include "imgsim/errors.hpp"
#include "imgsim/forward_sim.hpp"
#include "test_helpers.hpp"

using namespace imgsim;
using testing::points;
using testing::relative_error;
using testing::section7;

namespace {

std::vector<cdouble> steered_weights(const ImagingConfig &c, double theta, double phi) {
  std::vector<cdouble> w;
  for (const auto &p : aperture_positions(c)) {
    w.push_back(steering_weight(p, theta, phi, c.wavenumber()));
  }
  return w;
}

} // namespace

TEST_CASE("transmit_field") {
  auto c = section7(1);
  const double k = c.wavenumber();
  const cdouble single = transmit_field({0.0, 0.0}, 0.0, 0.0, c, std::vector<cdouble>{{1.0, 0.0}});
  CHECK(std::abs(single - std::polar(c.beamsteer_element_amplitude(), -k * c.z0_m)) < 1e-12);

  c = section7(16);
  c.z0_m = 50.0;
  const double x = 2.0;
  const double y = -1.0;
  const double theta = std::atan(std::hypot(x, y) / c.z0_m);
  const double phi = std::atan2(y, x);
  const auto w = steered_weights(c, theta, phi);
  const double coherent = 256.0 * c.beamsteer_element_amplitude();
  CHECK(std::abs(transmit_field({x, y}, theta, phi, c, w)) > 0.99 * coherent);
  CHECK(std::abs(transmit_field({x, y}, theta, phi, c, w)) <= coherent * (1.0 + 1e-12));

  const std::vector<cdouble> zeros(256);
  CHECK(transmit_field({x, y}, theta, phi, c, zeros) == cdouble{});
  CHECK_THROWS_AS((void)transmit_field({0, 0}, 0, 0, c, std::vector<cdouble>(3)),
                  DimensionMismatch);
}

TEST_CASE("factorization: echo of one reflector is the squared one-way sum") {
  auto c = section7(8);
  c.tx_amplitude = 8.0; // unit per-element amplitude
  const Reflector r{3e-3, -2e-3, {1.0, 0.0}};
  const auto grid = build_steering_grid(c, 16);
  const EchoData echo = beamsteer_echo(points({r}), grid, c, {});
  for (std::size_t row = 0; row < grid.size(); ++row) {
    for (std::size_t col = 0; col < grid.size(); ++col) {
      if (!grid.inside(row, col)) {
        CHECK(echo.samples(row, col) == cdouble{});
        continue;
      }
      const auto a = grid.angles(row, col);
      const cdouble one_way =
          transmit_field({r.x, r.y}, a.theta, a.phi, c, steered_weights(c, a.theta, a.phi));
      const cdouble want = one_way * one_way;
      CHECK(std::abs(echo.samples(row, col) - want) <= 1e-12 * std::abs(want));
    }
  }
}

TEST_CASE("linearity of the forward operators") {
  const auto c = section7(8);
  const auto grid = build_steering_grid(c, 16);
  const cdouble alpha{0.3, -1.2};
  const std::vector<Reflector> s1{{1e-3, 2e-3, {1.0, 0.5}}, {-4e-3, 0.0, {0.2, 0.0}}};
  const std::vector<Reflector> s2{{5e-3, -3e-3, {-0.7, 0.1}}};
  std::vector<Reflector> combined;
  for (const auto &r : s1) {
    combined.push_back({r.x, r.y, alpha * r.amplitude});
  }
  combined.insert(combined.end(), s2.begin(), s2.end());

  auto check = [&](auto op) {
    const CMatrix a = op(points(s1)).samples;
    const CMatrix b = op(points(s2)).samples;
    CMatrix want(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
      want.flat()[i] = alpha * a.flat()[i] + b.flat()[i];
    }
    CHECK(relative_error(op(points(combined)).samples, want) < 1e-10);
  };
  check([&](const Scene &s) { return beamsteer_echo(s, grid, c, {}); });
  check([&](const Scene &s) { return ideal_echo(s, grid, c); });
  check([&](const Scene &s) { return switched_echo(s, c, {}); });
}

TEST_CASE("beam-steered broadside phase") {
  auto c = section7(8);
  c.z0_m = 1.0;
  const auto grid = build_steering_grid(c, 33); // odd size puts a look at theta = 0
  REQUIRE(grid.kx(16) == doctest::Approx(0.0).epsilon(1e-12));
  const EchoData echo = beamsteer_echo(points({{0.0, 0.0, {1.0, 0.0}}}), grid, c, {});
  double mean_path = 0.0;
  for (const auto &p : aperture_positions(c)) {
    mean_path += std::sqrt(p.x * p.x + p.y * p.y + c.z0_m * c.z0_m);
  }
  mean_path /= 64.0;
  const double want = -2.0 * c.wavenumber() * mean_path;
  const double got = std::arg(echo.samples(16, 16));
  CHECK(std::abs(std::remainder(got - want, 2.0 * std::numbers::pi)) < 0.01);
  CHECK(std::abs(std::remainder(got + 2.0 * c.wavenumber() * c.z0_m, 2.0 * std::numbers::pi)) <
        0.05);
}

TEST_CASE("element-sum agrees with plane-wave phase in the far field") {
  auto c = section7(8);
  c.z0_m = 10.0;
  const auto grid = build_steering_grid(c, 16);
  const Scene s = points({{0.0, 0.0, {1.0, 0.0}}});
  const EchoData elem = beamsteer_echo(s, grid, c, {});
  const EchoData ideal = ideal_echo(s, grid, c);
  double worst = 0.0;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t col = 0; col < grid.size(); ++col) {
      if (grid.inside(r, col)) {
        worst = std::max(worst, std::abs(std::arg(elem.samples(r, col) *
                                                  std::conj(ideal.samples(r, col)))));
      }
    }
  }
  CHECK(worst < 0.05);
}

TEST_CASE("ideal echo") {
  const auto c = section7(8);
  const double k = c.wavenumber();
  const auto grid = build_steering_grid(c, 33);
  const EchoData e = ideal_echo(points({{0.0, 0.0, {1.0, 0.0}}}), grid, c);
  CHECK(std::abs(e.samples(16, 16) - std::polar(1.0 / k, -2.0 * k * c.z0_m)) < 1e-15);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t col = 0; col < grid.size(); ++col) {
      if (!grid.inside(r, col)) {
        continue;
      }
      const double cos_t = std::cos(grid.angles(r, col).theta);
      // |s| depends on theta only: compare with the transposed point.
      CHECK(std::abs(std::abs(e.samples(r, col)) - 1.0 / (k * cos_t)) < 1e-15);
      CHECK(std::abs(e.samples(r, col)) == doctest::Approx(std::abs(e.samples(col, r))));
    }
  }
  const EchoData a = ideal_echo(points({{1e-3, 0.0, {1.0, 0.0}}}), grid, c);
  const EchoData b = ideal_echo(points({{0.0, -2e-3, {0.0, 1.0}}}), grid, c);
  const EchoData ab = ideal_echo(points({{1e-3, 0.0, {1.0, 0.0}}, {0.0, -2e-3, {0.0, 1.0}}}), grid, c);
  for (std::size_t i = 0; i < ab.samples.size(); ++i) {
    CHECK(std::abs(ab.samples.flat()[i] - a.samples.flat()[i] - b.samples.flat()[i]) < 1e-15);
  }

  const double kk = c.wavenumber();
  const SteeringGrid grazing(5, 2.0 * std::sqrt(2.0) * kk * (1.0 - 1e-13), kk);
  CHECK_THROWS_AS((void)ideal_echo(points({{0.0, 0.0, {1.0, 0.0}}}), grazing, c), GrazingAngle);
}

TEST_CASE("switched echo") {
  auto c = section7(3);
  const double k = c.wavenumber();
  const EchoData e = switched_echo(points({{0.0, 0.0, {1.0, 0.0}}}), c, {});
  CHECK(e.kind == EchoKind::Switched2d);
  REQUIRE(e.samples.rows() == 3);
  CHECK(std::abs(std::arg(e.samples(1, 1) * std::polar(1.0, 2.0 * k * c.z0_m))) < 1e-9);
  CHECK(std::abs(e.samples(1, 1)) == doctest::Approx(1.0));
  c.tx_amplitude = 2.5;
  const EchoData scaled = switched_echo(points({{0.0, 0.0, {1.0, 0.0}}}), c, {});
  CHECK(std::abs(scaled.samples(0, 2)) == doctest::Approx(2.5));
  const EchoData empty = switched_echo(Scene{}, c, {});
  for (const auto &v : empty.samples.flat()) {
    CHECK(v == cdouble{});
  }
}

TEST_CASE("empty scene gives an all-zero beam-steered echo") {
  const auto c = section7(4);
  const auto grid = build_steering_grid(c, 8);
  const EchoData e = beamsteer_echo(Scene{}, grid, c, {});
  for (const auto &v : e.samples.flat()) {
    CHECK(v == cdouble{});
  }
}

TEST_CASE("receiver noise power follows the SNR reference") {
  const auto c = section7(4);
  const Scene s = points({{0.0, 0.0, {1.0, 0.0}}});
  ImpairmentSpec spec;
  spec.snr_db = 0.0;
  spec.seed = 9;
  // Switched: per-sample variance equals the mean per-sample power.
  double sum = 0.0;
  double signal = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    spec.seed = seed;
    const auto clean = switched_echo(s, c, {});
    const auto noisy = switched_echo(s, c, spec);
    for (std::size_t i = 0; i < clean.samples.size(); ++i) {
      sum += std::norm(noisy.samples.flat()[i] - clean.samples.flat()[i]);
      signal += std::norm(clean.samples.flat()[i]);
      ++count;
    }
  }
  CHECK(sum / count == doctest::Approx(signal / count).epsilon(0.03));

  // Absolute override, beam-steered: N_a^2 receive elements each add sigma^2.
  ImpairmentSpec abs;
  abs.noise_power_w = 0.25;
  abs.snr_db = 40.0; // ignored under the override
  const auto grid = build_steering_grid(c, 8);
  double acc = 0.0;
  int looks = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    abs.seed = seed;
    const auto clean = beamsteer_echo(s, grid, c, {});
    const auto noisy = beamsteer_echo(s, grid, c, abs);
    for (std::size_t i = 0; i < clean.samples.size(); ++i) {
      if (clean.samples.flat()[i] != cdouble{}) {
        acc += std::norm(noisy.samples.flat()[i] - clean.samples.flat()[i]);
        ++looks;
      }
    }
  }
  CHECK(acc / looks == doctest::Approx(0.25 * 16.0).epsilon(0.03));
}

TEST_CASE("impaired acquisition is deterministic per seed") {
  const auto c = section7(8);
  const auto grid = build_steering_grid(c, 16);
  const Scene s = points({{2e-3, 1e-3, {1.0, 0.0}}});
  ImpairmentSpec spec;
  spec.snr_db = -10.0;
  spec.sigma_phi_rad = 0.4;
  spec.phase_bits = 3;
  spec.seed = 77;
  const auto a = beamsteer_echo(s, grid, c, spec);
  const auto b = beamsteer_echo(s, grid, c, spec);
  CHECK(a.samples == b.samples);
  spec.seed = 78;
  CHECK_FALSE(beamsteer_echo(s, grid, c, spec).samples == a.samples);
}

TEST_CASE("shared tx/rx phase noise switch changes the draws") {
  const auto c = section7(4);
  const auto grid = build_steering_grid(c, 8);
  const Scene s = points({{0.0, 0.0, {1.0, 0.0}}});
  ImpairmentSpec spec;
  spec.sigma_phi_rad = 0.5;
  spec.seed = 3;
  const auto independent = beamsteer_echo(s, grid, c, spec);
  spec.shared_tx_rx_phase_noise = true;
  const auto shared = beamsteer_echo(s, grid, c, spec);
  CHECK_FALSE(independent.samples == shared.samples);
}

TEST_CASE("1D echo") {
  const auto c = section7(16);
  const auto grid = build_theta_grid_1d(c, 32);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(2.0 * c.wavenumber() * std::sin(grid.theta[i]) ==
          doctest::Approx(grid.k_at(i)).epsilon(1e-12));
  }
  const std::vector<Reflector1d> one{{0.0, {1.0, 0.0}}};
  const std::vector<Reflector1d> two{{0.0, {2.0, 0.0}}};
  const auto a = beamsteer_echo_1d(one, grid, c, 0.0, 5, 0);
  const auto b = beamsteer_echo_1d(one, grid, c, 0.0, 6, 3);
  CHECK(a.samples == b.samples); // sigma 0 ignores the draws
  const auto d = beamsteer_echo_1d(two, grid, c, 0.0, 5, 0);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(std::abs(d.samples.flat()[i] - 2.0 * a.samples.flat()[i]) < 1e-12);
  }
  const auto n1 = beamsteer_echo_1d(one, grid, c, 0.5, 5, 0);
  const auto n2 = beamsteer_echo_1d(one, grid, c, 0.5, 5, 0);
  const auto n3 = beamsteer_echo_1d(one, grid, c, 0.5, 5, 1);
  CHECK(n1.samples == n2.samples);
  CHECK_FALSE(n1.samples == n3.samples);
}
