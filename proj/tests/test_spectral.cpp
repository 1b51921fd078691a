#include <doctest.h>

#include <cmath>

#include "imgsim/errors.hpp"
#include "imgsim/random.hpp"
#include "imgsim/spectral.hpp"

using namespace imgsim;

namespace {

CMatrix random_matrix(std::size_t r, std::size_t c, std::uint32_t tag) {
  CounterRng rng(17, Stream::Test, tag);
  CMatrix m(r, c);
  for (auto &v : m.flat()) {
    v = rng.complex_normal();
  }
  return m;
}

double energy(const CMatrix &m) {
  double e = 0.0;
  for (const auto &v : m.flat()) {
    e += std::norm(v);
  }
  return e;
}

} // namespace

TEST_CASE("constant input transforms to a DC impulse") {
  CMatrix x(4, 4);
  for (auto &v : x.flat()) {
    v = {2.0, 0.0};
  }
  const CMatrix X = dft2(x);
  CHECK(X(0, 0).real() == doctest::Approx(32.0));
  for (std::size_t i = 1; i < X.size(); ++i) {
    CHECK(std::abs(X.flat()[i]) < 1e-12);
  }
}

TEST_CASE("sign convention") {
  std::vector<cdouble> x(8);
  x[1] = {1.0, 0.0};
  const auto X = dft(x);
  // Delay of one sample gives exp(-j 2 pi u / N).
  CHECK(std::abs(X[2] - std::polar(1.0, -2.0 * 3.14159265358979323846 * 2.0 / 8.0)) < 1e-15);
  const auto back = idft(X);
  CHECK(std::abs(back[1] - cdouble{1.0, 0.0}) < 1e-15);
}

TEST_CASE("round trip and Parseval, sizes 4 to 64") {
  std::uint32_t tag = 0;
  for (std::size_t r : {4, 5, 8, 16, 33, 64}) {
    for (std::size_t c : {4, 7, 32, 64}) {
      const CMatrix x = random_matrix(r, c, tag++);
      const CMatrix X = dft2(x);
      const CMatrix y = idft2(X);
      const double scale = std::sqrt(energy(x));
      double err = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        err = std::max(err, std::abs(y.flat()[i] - x.flat()[i]));
      }
      CHECK(err / scale < 1e-12);
      const double n = static_cast<double>(x.size());
      CHECK(std::abs(energy(x) - energy(X) / n) / energy(x) < 1e-12);
    }
  }
  const CMatrix x = random_matrix(8, 8, 99);
  const CMatrix y = idft2(dft2(x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(y.flat()[i] - x.flat()[i]) < 1e-12);
  }
}

TEST_CASE("1d round trip") {
  CounterRng rng(3, Stream::Test);
  std::vector<cdouble> x(37);
  for (auto &v : x) {
    v = rng.complex_normal();
  }
  const auto y = idft(dft(x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(y[i] - x[i]) < 1e-13);
  }
}

TEST_CASE("empty input") {
  CHECK_THROWS_AS((void)dft2(CMatrix()), DimensionMismatch);
  CHECK_THROWS_AS((void)idft(std::vector<cdouble>{}), DimensionMismatch);
}
