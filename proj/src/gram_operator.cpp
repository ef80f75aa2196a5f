#include "krglm/gram_operator.hpp"

#include <algorithm>
#include <numeric>

#include "krglm/error.hpp"
#include "krglm/simd.hpp"

namespace krglm {

namespace {

std::vector<std::size_t> argsort_column(const Dataset& x) {
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x(a, 0) < x(b, 0); });
  return order;
}

}  // namespace

GramOperator::GramOperator(const Kernel& kernel, const Dataset& x, OperatorMode mode)
    : n_(x.rows()) {
  if (x.empty()) throw InputError("gram operator: empty dataset");
  check_domain(kernel, x);
  diag_.resize(n_);
  if (kernel.kind == KernelKind::Sobolev1 && mode == OperatorMode::Auto) {
    structured_ = true;
    order_ = argsort_column(x);
    sorted_x_.resize(n_);
    for (std::size_t t = 0; t < n_; ++t) sorted_x_[t] = x(order_[t], 0);
    for (std::size_t i = 0; i < n_; ++i) diag_[i] = x(i, 0);
    return;
  }
  const Eigen::MatrixXd g = gram(kernel, x);
  dense_.resize(n_ * n_);
  // symmetric, so column-major storage doubles as row-major
  std::copy(g.data(), g.data() + n_ * n_, dense_.begin());
  for (std::size_t i = 0; i < n_; ++i) diag_[i] = dense_[i * n_ + i];
}

void GramOperator::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != n_ || out.size() != n_) throw InputError("gram operator: size mismatch");
  if (!structured_) {
    simd::ops().sym_matvec(dense_.data(), n_, v.data(), out.data());
    return;
  }
  // suffix sums of v in sorted order, then a forward pass for the prefix part
  std::vector<double> suffix(n_ + 1, 0.0);
  for (std::size_t t = n_; t-- > 0;) suffix[t] = suffix[t + 1] + v[order_[t]];
  double prefix = 0.0;
  for (std::size_t t = 0; t < n_; ++t) {
    const std::size_t i = order_[t];
    prefix += sorted_x_[t] * v[i];
    out[i] = prefix + sorted_x_[t] * suffix[t + 1];
  }
}

std::vector<double> representer_eval(const Kernel& kernel, const Dataset& x,
                                     std::span<const double> coef, const Dataset& z) {
  if (coef.size() != x.rows()) throw InputError("representer_eval: coefficient length mismatch");
  check_domain(kernel, z);
  std::vector<double> out(z.rows(), 0.0);
  if (x.empty()) return out;
  check_domain(kernel, x);
  if (kernel.kind != KernelKind::Sobolev1 && z.rows() > 0 && x.cols() != z.cols())
    throw DomainError("representer_eval: datasets differ in dimension");

  if (kernel.kind == KernelKind::Sobolev1) {
    const auto order = argsort_column(x);
    const std::size_t n = x.rows();
    std::vector<double> xs(n), weighted_prefix(n + 1, 0.0), coef_suffix(n + 1, 0.0);
    for (std::size_t t = 0; t < n; ++t) xs[t] = x(order[t], 0);
    for (std::size_t t = 0; t < n; ++t)
      weighted_prefix[t + 1] = weighted_prefix[t] + xs[t] * coef[order[t]];
    for (std::size_t t = n; t-- > 0;) coef_suffix[t] = coef_suffix[t + 1] + coef[order[t]];
    for (std::size_t j = 0; j < z.rows(); ++j) {
      const double zj = z(j, 0);
      const auto cut = static_cast<std::size_t>(
          std::upper_bound(xs.begin(), xs.end(), zj) - xs.begin());
      out[j] = weighted_prefix[cut] + zj * coef_suffix[cut];
    }
    return out;
  }

  const std::vector<double> xt = x.transposed();
  std::vector<double> col(x.rows());
  const auto& backend = simd::ops();
  for (std::size_t j = 0; j < z.rows(); ++j) {
    kernel_column(kernel, xt, x.rows(), x.cols(), z.row(j), col);
    out[j] = backend.dot(col.data(), coef.data(), col.size());
  }
  return out;
}

}  // namespace krglm
