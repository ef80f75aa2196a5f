#pragma once

#include <random>
#include <vector>

#include "krglm/dataset.hpp"
#include "krglm/kernel.hpp"

namespace krglm::testing {

// Covariates suited to the kernel: scalar points in [0,1] for Sobolev1,
// d-dimensional points in [-1,1]^d otherwise.
inline Dataset random_covariates(const Kernel& k, std::size_t n, std::size_t d,
                                 std::mt19937_64& gen) {
  const bool sobolev = k.kind == KernelKind::Sobolev1;
  std::uniform_real_distribution<double> unif(sobolev ? 0.0 : -1.0, 1.0);
  const std::size_t cols = sobolev ? 1 : d;
  std::vector<double> x(n * cols);
  for (double& v : x) v = unif(gen);
  return Dataset(n, cols, std::move(x));
}

inline std::vector<Kernel> all_kernels() {
  return {Kernel::linear(), Kernel::affine(), Kernel::polynomial(2), Kernel::polynomial(3),
          Kernel::sobolev1()};
}

}  // namespace krglm::testing
