#include <cstdlib>
#include <cstring>

#include "krglm/simd.hpp"

namespace krglm::simd {

const Ops* avx2_table();

const Ops* avx2_ops() {
#if defined(KRGLM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Ops& ops() {
  static const Ops& active = [] () -> const Ops& {
    const char* forced = std::getenv("KRGLM_SIMD");
    if (forced && std::strcmp(forced, "scalar") == 0) return scalar_ops();
    if (const Ops* wide = avx2_ops()) return *wide;
    return scalar_ops();
  }();
  return active;
}

}  // namespace krglm::simd
