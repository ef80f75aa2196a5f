#pragma once

#include <cstddef>

// Inner loops used by Gram assembly and kernel mat-vecs. Each backend fills
// the same table; the scalar table is the reference implementation.
//
// dot is free to reassociate its sum. Every other entry is lane-parallel with
// the same per-element operation order as the scalar loop (and no FMA), so
// those results are bitwise identical across backends.
namespace krglm::simd {

struct Ops {
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[j] = sum_k z[k] * xt[k * n + j] for j < n  (xt is d x n, feature-major)
  void (*dot_columns)(const double* z, const double* xt, std::size_t d, std::size_t n,
                      double* out);
  // out[j] = min(z, x[j])
  void (*min_broadcast)(double z, const double* x, std::size_t n, double* out);
  // y = A x for symmetric row-major A (n x n), accumulated as sum_k x[k] * A[k, :]
  void (*sym_matvec)(const double* a, std::size_t n, const double* x, double* y);
};

const Ops& scalar_ops();
// nullptr when the AVX2 backend is not compiled in or the CPU lacks AVX2.
const Ops* avx2_ops();

// Backend in use: the widest supported one, unless KRGLM_SIMD=scalar is set
// in the environment. Fixed for the lifetime of the process.
const Ops& ops();

}  // namespace krglm::simd
