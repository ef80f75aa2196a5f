#include "krglm/simd.hpp"

#if defined(KRGLM_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>

namespace krglm::simd {

namespace {

constexpr std::size_t kLanes = 4;

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + kLanes),
                                             _mm256_loadu_pd(b + i + kLanes)));
  }
  for (; i + kLanes <= n; i += kLanes)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void dot_columns(const double* z, const double* xt, std::size_t d, std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < d; ++k)
      s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(z[k]), _mm256_loadu_pd(xt + k * n + j)));
    _mm256_storeu_pd(out + j, s);
  }
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += z[k] * xt[k * n + j];
    out[j] = s;
  }
}

void min_broadcast(double z, const double* x, std::size_t n, double* out) {
  // min(z, x) with std::min semantics: returns z unless x < z
  const __m256d vz = _mm256_set1_pd(z);
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d vx = _mm256_loadu_pd(x + j);
    const __m256d lt = _mm256_cmp_pd(vx, vz, _CMP_LT_OQ);
    _mm256_storeu_pd(out + j, _mm256_blendv_pd(vz, vx, lt));
  }
  for (; j < n; ++j) out[j] = std::min(z, x[j]);
}

void sym_matvec(const double* a, std::size_t n, const double* x, double* y) {
  std::fill(y, y + n, 0.0);
  for (std::size_t k = 0; k < n; ++k) axpy(x[k], a + k * n, y, n);
}

}  // namespace

const Ops* avx2_table() {
  static const Ops table{"avx2", dot, axpy, dot_columns, min_broadcast, sym_matvec};
  return &table;
}

}  // namespace krglm::simd

#else

namespace krglm::simd {
struct Ops;
const Ops* avx2_table() { return nullptr; }
}  // namespace krglm::simd

#endif
