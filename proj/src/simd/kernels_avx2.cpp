// Compiled with -mavx2; only reached through the runtime dispatcher after a
// CPU feature check.

#include <immintrin.h>

#include <cmath>

#include "tered/simd/kernels.hpp"

namespace tered::simd::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// _mm256_max_pd(a, b) is (a > b ? a : b), the scalar kernel's update rule.
inline __m256d block_distance(std::span<const double* const> cols, std::span<const double> query, std::size_t i) {
  __m256d acc = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(cols[0] + i), _mm256_set1_pd(query[0])));
  for (std::size_t d = 1; d < cols.size(); ++d) {
    const __m256d diff = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(cols[d] + i), _mm256_set1_pd(query[d])));
    acc = _mm256_max_pd(diff, acc);
  }
  return acc;
}

}  // namespace

void chebyshev_distances(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double* out) {
  if (cols.empty()) {
    scalar::chebyshev_distances(cols, query, count, out);
    return;
  }
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) _mm256_storeu_pd(out + i, block_distance(cols, query, i));
  for (; i < count; ++i) {
    double acc = std::abs(cols[0][i] - query[0]);
    for (std::size_t d = 1; d < cols.size(); ++d) {
      const double diff = std::abs(cols[d][i] - query[d]);
      acc = diff > acc ? diff : acc;
    }
    out[i] = acc;
  }
}

std::size_t count_within(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double radius) {
  if (cols.empty()) return scalar::count_within(cols, query, count, radius);
  const __m256d r = _mm256_set1_pd(radius);
  std::size_t n = 0;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d inside = _mm256_cmp_pd(block_distance(cols, query, i), r, _CMP_LT_OQ);
    n += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(inside))));
  }
  for (; i < count; ++i) {
    double acc = std::abs(cols[0][i] - query[0]);
    for (std::size_t d = 1; d < cols.size(); ++d) {
      const double diff = std::abs(cols[d][i] - query[d]);
      acc = diff > acc ? diff : acc;
    }
    n += acc < radius ? 1 : 0;
  }
  return n;
}

}  // namespace tered::simd::avx2
