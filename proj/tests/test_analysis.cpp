#include <doctest.h>

#include <cmath>
#include <limits>

#include "imgsim/analysis.hpp"
#include "imgsim/errors.hpp"
#include "test_helpers.hpp"

using namespace imgsim;
using testing::points;
using testing::section7;

namespace {

std::size_t argmax(const std::vector<double> &v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

SslCurve synthetic(double floor_db, double slope, double intercept) {
  SslCurve c;
  for (int i = 0; i <= 20; ++i) {
    const double s = 0.25 * i;
    c.sigma_values.push_back(s);
    c.ssl_db.push_back(std::min(0.0, std::max(floor_db, slope * s + intercept)));
  }
  return c;
}

} // namespace

TEST_CASE("ssl") {
  const std::vector<double> toy{0, 1, 0, 0.5, 0};
  CHECK(ssl(toy) == doctest::Approx(20.0 * std::log10(0.5)));
  CHECK(ssl(toy) == doctest::Approx(-6.0206).epsilon(1e-4));
  const std::vector<double> mono{0.1, 0.5, 1.0, 0.7, 0.2};
  CHECK(ssl(mono) == -std::numeric_limits<double>::infinity());
  const std::vector<double> flat{1.0, 1.0};
  CHECK_THROWS_AS((void)ssl(flat), AnalysisError);
  CHECK_THROWS_AS((void)ssl(std::vector<double>{}), AnalysisError);
  // Plateau next to the mainlobe is not a sidelobe; the later bump is.
  const std::vector<double> p{0.0, 0.2, 0.2, 1.0, 0.3, 0.1, 0.4, 0.05};
  CHECK(ssl(p) == doctest::Approx(20.0 * std::log10(0.4)));
  std::vector<double> scaled = p;
  for (auto &v : scaled) {
    v *= 7.5;
  }
  CHECK(ssl(scaled) == doctest::Approx(ssl(p)).epsilon(1e-14));
}

TEST_CASE("psf_1d") {
  auto c = section7(64);
  const auto clean = psf_1d(c, 0.0, 1, 3);
  const std::size_t g = argmax(clean);
  CHECK(g == clean.size() / 2);
  for (std::size_t d = 1; d < 50; ++d) {
    CHECK(std::abs(clean[g - d] - clean[g + d]) <= 0.01 * clean[g]);
  }
  CHECK(ssl(clean) < -10.0);

  const auto noisy = psf_1d(c, 0.5, 200, 3);
  const std::size_t n = argmax(noisy);
  const double pitch_ratio = 8.0; // oversampled samples per reconstruction pitch
  CHECK(std::abs(static_cast<double>(n) - static_cast<double>(noisy.size() / 2)) <= pitch_ratio);

  CHECK(psf_1d(c, 0.7, 1, 11) != psf_1d(c, 0.7, 2, 11));
  CHECK(psf_1d(c, 0.7, 3, 11) == psf_1d(c, 0.7, 3, 11));
  CHECK_THROWS_AS((void)psf_1d(c, 0.1, 0, 1), InvalidConfig);
}

TEST_CASE("ssl_sweep shape for N_a = 16") {
  ImagingConfig ref = section7(16);
  ref.spacing_m = 3.5e-3;
  const std::vector<double> sigmas{0.0, 0.1, 0.2, 0.3, 5.0};
  const SslCurve curve = ssl_sweep(16, sigmas, 200, ref, 21);
  REQUIRE(curve.ssl_db.size() == sigmas.size());
  const auto noiseless = psf_1d(ref, 0.0, 1, 21, {0, 8});
  CHECK(curve.ssl_db[0] == doctest::Approx(ssl(noiseless)).epsilon(1e-12));
  for (int i = 1; i <= 3; ++i) {
    CHECK(std::abs(curve.ssl_db[static_cast<std::size_t>(i)] - curve.ssl_db[0]) <= 1.0);
  }
  CHECK(curve.ssl_db[4] > curve.ssl_db[0] + 5.0);
  for (double v : curve.ssl_db) {
    CHECK(v <= 0.0);
  }
  const std::vector<double> unsorted{0.2, 0.1};
  CHECK_THROWS_AS((void)ssl_sweep(16, unsorted, 2, ref, 1), InvalidConfig);
}

TEST_CASE("breakpoint_fit on synthetic curves") {
  const auto report = breakpoint_fit(synthetic(-20.0, 8.0, -32.0));
  CHECK(report.fit_slope == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(report.fit_intercept == doctest::Approx(-32.0).epsilon(1e-12));
  CHECK(report.sigma_sb == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(report.sigma_tb == doctest::Approx(3.875).epsilon(1e-12));
  CHECK(report.floor_db == -20.0);
  CHECK(report.sigma_sb < report.sigma_tb);

  // Floor -20 with 4 sigma - 14 meets the floor at sigma = -1.5, outside any sweep.
  SslCurve steep = synthetic(-20.0, 4.0, -14.0);
  steep.ssl_db.front() = -20.0;
  CHECK_THROWS_AS((void)breakpoint_fit(steep), FitFailure);
  CHECK_THROWS_AS((void)breakpoint_fit(synthetic(-30.0, 0.0, -25.0)), FitFailure);
  SslCurve falling = synthetic(-20.0, 8.0, -32.0);
  for (auto &v : falling.ssl_db) {
    v = -v - 12.0;
  }
  falling.ssl_db.front() = -20.0;
  CHECK_THROWS_AS((void)breakpoint_fit(falling), FitFailure);

  SslCurve nudged = synthetic(-20.0, 8.0, -32.0);
  nudged.ssl_db[12] += 1e-6;
  const auto r2 = breakpoint_fit(nudged);
  CHECK(std::abs(r2.sigma_sb - report.sigma_sb) < 1e-5);
  CHECK(std::abs(r2.sigma_tb - report.sigma_tb) < 1e-5);

  const FitWindow wide{-15.0, -1.5, -1.0};
  CHECK(breakpoint_fit(synthetic(-20.0, 8.0, -32.0), wide).sigma_sb == doctest::Approx(1.5));
}

TEST_CASE("breakpoint_model_fit") {
  const std::vector<SizePoint> pts{{10, 1.0}, {100, 2.0}};
  const LogFit f = breakpoint_model_fit(pts);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(f.intercept) < 1e-14);
  std::vector<SizePoint> model;
  for (int n : {16, 64, 128}) {
    model.push_back({n, 0.7516 * std::log10(n) - 0.1152});
  }
  const LogFit published = breakpoint_model_fit(model);
  CHECK(published.slope == doctest::Approx(0.7516).epsilon(1e-12));
  CHECK(published.intercept == doctest::Approx(-0.1152).epsilon(1e-12));
  CHECK(0.7516 * std::log10(16.0) - 0.1152 == doctest::Approx(0.7898).epsilon(1e-4));
  CHECK(0.5326 * std::log10(16.0) + 1.1282 == doctest::Approx(1.7695).epsilon(1e-4));
  const std::vector<SizePoint> same{{16, 1.0}, {16, 2.0}};
  CHECK_THROWS_AS((void)breakpoint_model_fit(same), FitFailure);
  CHECK_THROWS_AS((void)breakpoint_model_fit(std::vector<SizePoint>{{16, 1.0}}), FitFailure);
}

TEST_CASE("resolution formulas") {
  auto c = section7();
  CHECK(resolution_switched(c) == doctest::Approx(4.605e-3).epsilon(1e-3));
  CHECK(resolution_beamsteer(0.0, 0.0, c) == resolution_switched(c));
  double prev = 0.0;
  for (double x = 0.0; x < 0.05; x += 0.005) {
    const double d = resolution_beamsteer(x, 0.0, c);
    CHECK(d > prev);
    prev = d;
  }
  auto far = c;
  far.z0_m = 1e3;
  CHECK(resolution_beamsteer(0.01, 0.01, far) ==
        doctest::Approx(resolution_switched(far)).epsilon(1e-9));
  auto wide = c;
  wide.spacing_m *= 2.0;
  CHECK(resolution_switched(wide) == doctest::Approx(resolution_switched(c) / 2.0));
  auto high = c;
  high.frequency_hz *= 2.0;
  CHECK(resolution_switched(high) == doctest::Approx(resolution_switched(c) / 2.0));
  auto limited = c;
  limited.theta_limit_rad = 0.1;
  CHECK_THROWS_AS((void)resolution_beamsteer(0.05, 0.0, limited), InvalidConfig);
  // Rayleigh floor as a formula property.
  const double lambda = c.wavelength();
  CHECK(resolution_beamsteer(0.0, 0.0, c) >= lambda / 2.0);
}

TEST_CASE("array gain") {
  CHECK(array_gain_db(32) == doctest::Approx(60.206).epsilon(1e-4));
  CHECK(array_gain_db(1) == 0.0);
  CHECK(array_gain_db(8) == doctest::Approx(36.124).epsilon(1e-4));
  CHECK_THROWS_AS((void)array_gain_db(0), InvalidConfig);
}

TEST_CASE("measured processing gain, small array") {
  const auto c = section7(8);
  const auto g = measure_processing_gain(c, default_grid_size(8), 1.0, 4);
  CHECK(std::abs(g.gain_db - array_gain_db(8)) < 3.0);
  CHECK(far_field_distance(c) == doctest::Approx(4.0 * std::pow(7.0 * 1.75e-3, 2) / c.wavelength()));
}

TEST_CASE("image_error") {
  Image img;
  img.pixels = CMatrix(20, 20);
  img.pitch_x = img.pitch_y = 1e-3;
  img.origin = {-10e-3, -10e-3};
  const Scene truth = points({{0.0, 0.0, {1.0, 0.0}}, {3e-3, 0.0, {1.0, 0.0}}});
  img.pixels(10, 10) = {1.0, 0.0};
  img.pixels(10, 13) = {1.0, 0.0};
  const ImageError exact = image_error(img, truth);
  CHECK(exact.normalized_rmse == 0.0);
  CHECK(exact.peak_offset_m == 0.0);

  const double eps = 1e-3;
  for (auto &v : img.pixels.flat()) {
    if (v == cdouble{}) {
      v = {eps, 0.0};
    }
  }
  CHECK(image_error(img, truth).peak_to_background_db == doctest::Approx(60.0).epsilon(1e-9));

  Image zero = img;
  for (auto &v : zero.pixels.flat()) {
    v = {};
  }
  CHECK_THROWS_AS((void)image_error(zero, truth), AnalysisError);
  CHECK_THROWS_AS((void)image_error(img, Scene{}), AnalysisError);
  CHECK_THROWS_AS((void)image_error(img, points({{0.5, 0.0, {1, 0}}})), AnalysisError);
}

TEST_CASE("peak finding") {
  Image img;
  img.pixels = CMatrix(9, 9);
  img.pitch_x = img.pitch_y = 1.0;
  img.pixels(4, 2) = {1.0, 0.0};
  img.pixels(4, 6) = {0.8, 0.0};
  img.pixels(4, 5) = {0.4, 0.0};
  img.pixels(4, 7) = {0.4, 0.0};
  const auto peaks = find_peaks(img);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].col == 2);
  CHECK(peaks[1].col == 6);
  CHECK(peaks[1].position.x == doctest::Approx(6.0));
  const auto pair = measure_pair(img);
  CHECK(pair.peak_count == 2);
  CHECK(pair.separation_m == doctest::Approx(4.0));
  CHECK(pair.dip_db > 20.0);
  const Peak b = brightest_pixel(img);
  CHECK(b.row == 4);
  CHECK(b.col == 2);
}
