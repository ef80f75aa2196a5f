#include <algorithm>

#include "krglm/simd.hpp"

namespace krglm::simd {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void dot_columns(const double* z, const double* xt, std::size_t d, std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += z[k] * xt[k * n + j];
    out[j] = s;
  }
}

void min_broadcast(double z, const double* x, std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = std::min(z, x[j]);
}

void sym_matvec(const double* a, std::size_t n, const double* x, double* y) {
  std::fill(y, y + n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = x[k];
    const double* row = a + k * n;
    for (std::size_t j = 0; j < n; ++j) y[j] += xk * row[j];
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{"scalar", dot, axpy, dot_columns, min_broadcast, sym_matvec};
  return table;
}

}  // namespace krglm::simd
