#include "imgsim/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>

#include "imgsim/errors.hpp"

namespace imgsim {

namespace {

// FFTW's planner is not re-entrant; execution is.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (ptr == nullptr) {
      throw std::bad_alloc();
    }
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer &) = delete;
  FftwBuffer &operator=(const FftwBuffer &) = delete;
  fftw_complex *ptr;
};

struct PlanDeleter {
  void operator()(fftw_plan_s *p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

void transform(const cdouble *in, cdouble *out, int rows, int cols, int sign) {
  const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  FftwBuffer src(n);
  FftwBuffer dst(n);
  std::memcpy(src.ptr, in, n * sizeof(cdouble));
  PlanHandle plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(rows == 1 ? fftw_plan_dft_1d(cols, src.ptr, dst.ptr, sign, FFTW_ESTIMATE)
                         : fftw_plan_dft_2d(rows, cols, src.ptr, dst.ptr, sign, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  std::memcpy(static_cast<void *>(out), dst.ptr, n * sizeof(cdouble));
  if (sign == FFTW_BACKWARD) {
    const double scale = 1.0 / static_cast<double>(n);
    std::for_each(out, out + n, [scale](cdouble &v) { v *= scale; });
  }
}

CMatrix transform2(const CMatrix &x, int sign) {
  if (x.empty()) {
    throw DimensionMismatch("cannot transform an empty matrix");
  }
  CMatrix out(x.rows(), x.cols());
  transform(x.data(), out.data(), static_cast<int>(x.rows()), static_cast<int>(x.cols()), sign);
  return out;
}

std::vector<cdouble> transform1(std::span<const cdouble> x, int sign) {
  if (x.empty()) {
    throw DimensionMismatch("cannot transform an empty vector");
  }
  std::vector<cdouble> out(x.size());
  transform(x.data(), out.data(), 1, static_cast<int>(x.size()), sign);
  return out;
}

} // namespace

CMatrix dft2(const CMatrix &x) { return transform2(x, FFTW_FORWARD); }
CMatrix idft2(const CMatrix &x) { return transform2(x, FFTW_BACKWARD); }

std::vector<cdouble> dft(std::span<const cdouble> x) { return transform1(x, FFTW_FORWARD); }
std::vector<cdouble> idft(std::span<const cdouble> x) { return transform1(x, FFTW_BACKWARD); }

} // namespace imgsim
