#pragma once

#include <span>
#include <vector>

#include "imgsim/matrix.hpp"

namespace imgsim {

// Transform convention used throughout:
//   forward  X[u] = sum_n x[n] exp(-j 2 pi u n / N)
//   inverse  x[n] = (1/N) sum_u X[u] exp(+j 2 pi u n / N)
// In two dimensions N is the total sample count rows * cols.
// Empty inputs throw DimensionMismatch.

[[nodiscard]] CMatrix dft2(const CMatrix &x);
[[nodiscard]] CMatrix idft2(const CMatrix &x);

[[nodiscard]] std::vector<cdouble> dft(std::span<const cdouble> x);
[[nodiscard]] std::vector<cdouble> idft(std::span<const cdouble> x);

} // namespace imgsim
