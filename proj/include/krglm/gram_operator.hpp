#pragma once

#include <span>
#include <vector>

#include "krglm/dataset.hpp"
#include "krglm/kernel.hpp"

namespace krglm {

enum class OperatorMode {
  Auto,   // structured product for Sobolev1, dense Gram otherwise
  Dense,  // always assemble the n x n Gram matrix
};

// The linear map v -> K v for the Gram matrix of a fixed training set.
//
// Sobolev1 admits an exact O(n) product after sorting:
//   (K v)_i = sum_{x_j <= x_i} x_j v_j + x_i sum_{x_j > x_i} v_j
// which is what Auto uses for it. Other kernels multiply a dense Gram matrix.
class GramOperator {
public:
  GramOperator(const Kernel& kernel, const Dataset& x, OperatorMode mode = OperatorMode::Auto);

  std::size_t size() const noexcept { return n_; }
  bool structured() const noexcept { return structured_; }
  void apply(std::span<const double> v, std::span<double> out) const;
  std::span<const double> diagonal() const noexcept { return diag_; }

private:
  std::size_t n_ = 0;
  bool structured_ = false;
  std::vector<double> dense_;          // row-major n x n
  std::vector<std::size_t> order_;     // argsort of x (structured)
  std::vector<double> sorted_x_;
  std::vector<double> diag_;
};

// f(z_j) = sum_i coef_i K(x_i, z_j) for every row of z, without forming the
// cross-Gram matrix.
std::vector<double> representer_eval(const Kernel& kernel, const Dataset& x,
                                     std::span<const double> coef, const Dataset& z);

}  // namespace krglm
