#pragma once

// Max-norm distance kernels used by the nearest-neighbour search.
//
// Points are stored structure-of-arrays: `cols[d][i]` is coordinate d of point
// i. Every variant computes |p_d - q_d| and a running max in the same order,
// both exact in IEEE arithmetic, so all variants return bit-identical results.

#include <cstddef>
#include <span>

namespace tered::simd {

enum class Level { scalar, avx2 };

const char* to_string(Level level);

/// Best level the running CPU supports.
Level detected_level();

/// Level used by the dispatching entry points below.
Level active_level();

/// Overrides the dispatch level (tests, benchmarking). Throws
/// InvalidArgumentError if the CPU cannot run `level`.
void set_level(Level level);

bool supported(Level level);

/// out[i] = max_d |cols[d][i] - query[d]| for i < count.
void chebyshev_distances(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double* out);

/// Number of i < count with max_d |cols[d][i] - query[d]| < radius.
std::size_t count_within(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double radius);

namespace scalar {
void chebyshev_distances(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double* out);
std::size_t count_within(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double radius);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define TERED_HAVE_AVX2_KERNELS 1
namespace avx2 {
void chebyshev_distances(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double* out);
std::size_t count_within(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double radius);
}  // namespace avx2
#else
#define TERED_HAVE_AVX2_KERNELS 0
#endif

}  // namespace tered::simd
