#include <atomic>
#include <cstdlib>
#include <string_view>

#include "tered/errors.hpp"
#include "tered/simd/kernels.hpp"

namespace tered::simd {

namespace {

Level initial_level() {
  if (const char* env = std::getenv("TERED_SIMD")) {
    if (std::string_view(env) == "scalar") return Level::scalar;
  }
  return detected_level();
}

std::atomic<Level>& active() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

const char* to_string(Level level) { return level == Level::avx2 ? "avx2" : "scalar"; }

bool supported(Level level) {
  switch (level) {
    case Level::scalar:
      return true;
    case Level::avx2:
#if TERED_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Level detected_level() { return supported(Level::avx2) ? Level::avx2 : Level::scalar; }

Level active_level() { return active().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (!supported(level)) throw InvalidArgumentError(std::string("SIMD level not supported: ") + to_string(level));
  active().store(level, std::memory_order_relaxed);
}

void chebyshev_distances(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double* out) {
#if TERED_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::chebyshev_distances(cols, query, count, out);
#endif
  scalar::chebyshev_distances(cols, query, count, out);
}

std::size_t count_within(std::span<const double* const> cols, std::span<const double> query, std::size_t count,
                         double radius) {
#if TERED_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::count_within(cols, query, count, radius);
#endif
  return scalar::count_within(cols, query, count, radius);
}

}  // namespace tered::simd
