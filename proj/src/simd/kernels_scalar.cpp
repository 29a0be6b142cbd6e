#include <cmath>

#include "tered/simd/kernels.hpp"

namespace tered::simd::scalar {

void chebyshev_distances(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double* out) {
  const std::size_t dims = cols.size();
  if (dims == 0) {
    for (std::size_t i = 0; i < count; ++i) out[i] = 0.0;
    return;
  }
  for (std::size_t i = 0; i < count; ++i) {
    double acc = std::abs(cols[0][i] - query[0]);
    for (std::size_t d = 1; d < dims; ++d) {
      const double diff = std::abs(cols[d][i] - query[d]);
      acc = diff > acc ? diff : acc;
    }
    out[i] = acc;
  }
}

std::size_t count_within(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double radius) {
  const std::size_t dims = cols.size();
  if (dims == 0) return radius > 0.0 ? count : 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < count; ++i) {
    double acc = std::abs(cols[0][i] - query[0]);
    for (std::size_t d = 1; d < dims; ++d) {
      const double diff = std::abs(cols[d][i] - query[d]);
      acc = diff > acc ? diff : acc;
    }
    n += acc < radius ? 1 : 0;
  }
  return n;
}

}  // namespace tered::simd::scalar
