#include "krglm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "krglm/error.hpp"
#include "krglm/simd.hpp"

namespace krglm {

namespace {

double ipow(double base, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= base;
  return r;
}

// Kernel value as a function of the inner product x'z (all kinds but Sobolev1).
double from_inner(const Kernel& k, double ip) {
  switch (k.kind) {
    case KernelKind::Linear: return ip;
    case KernelKind::Affine: return 1.0 + ip;
    case KernelKind::Polynomial: return ipow(1.0 + ip, k.degree);
    case KernelKind::Sobolev1: break;
  }
  return ip;
}

void check_sobolev_point(std::span<const double> x) {
  if (x.size() != 1)
    throw DomainError("sobolev1 kernel needs scalar covariates, got dimension " +
                      std::to_string(x.size()));
  if (!(x[0] >= 0.0 && x[0] <= 1.0))
    throw DomainError("sobolev1 kernel covariate " + std::to_string(x[0]) + " outside [0,1]");
}

}  // namespace

Kernel Kernel::polynomial(int degree) {
  if (degree < 1) throw DomainError("polynomial kernel degree must be positive");
  return {KernelKind::Polynomial, degree};
}

std::string kernel_name(const Kernel& k) {
  switch (k.kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Affine: return "affine";
    case KernelKind::Polynomial: return "polynomial:" + std::to_string(k.degree);
    case KernelKind::Sobolev1: return "sobolev1";
  }
  return "unknown";
}

Kernel parse_kernel(std::string_view name, int degree) {
  if (name == "linear") return Kernel::linear();
  if (name == "affine") return Kernel::affine();
  if (name == "sobolev1" || name == "sobolev") return Kernel::sobolev1();
  if (name == "polynomial") return Kernel::polynomial(degree);
  if (name.starts_with("polynomial:")) {
    const std::string digits(name.substr(11));
    try {
      std::size_t used = 0;
      const int m = std::stoi(digits, &used);
      if (used == digits.size()) return Kernel::polynomial(m);
    } catch (const std::logic_error&) {
    }
  }
  throw InputError("unknown kernel '" + std::string(name) + "'");
}

void check_domain(const Kernel& k, const Dataset& x) {
  if (k.kind != KernelKind::Sobolev1) return;
  if (x.cols() != 1 && x.rows() > 0)
    throw DomainError("sobolev1 kernel needs scalar covariates, got dimension " +
                      std::to_string(x.cols()));
  for (std::size_t i = 0; i < x.rows(); ++i) check_sobolev_point(x.row(i));
}

double eval(const Kernel& k, std::span<const double> x, std::span<const double> z) {
  if (k.kind == KernelKind::Sobolev1) {
    check_sobolev_point(x);
    check_sobolev_point(z);
    return std::min(x[0], z[0]);
  }
  if (x.size() != z.size()) throw DomainError("kernel arguments differ in dimension");
  double ip = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) ip += x[j] * z[j];
  return from_inner(k, ip);
}

void kernel_column(const Kernel& k, std::span<const double> xt, std::size_t rows,
                   std::size_t cols, std::span<const double> z, std::span<double> out) {
  const auto& backend = simd::ops();
  if (k.kind == KernelKind::Sobolev1) {
    backend.min_broadcast(z[0], xt.data(), rows, out.data());
    return;
  }
  backend.dot_columns(z.data(), xt.data(), cols, rows, out.data());
  if (k.kind != KernelKind::Linear)
    for (std::size_t j = 0; j < rows; ++j) out[j] = from_inner(k, out[j]);
}

Eigen::MatrixXd gram(const Kernel& k, const Dataset& x) {
  if (x.empty()) throw InputError("gram: empty dataset");
  check_domain(k, x);
  const std::size_t n = x.rows();
  const std::vector<double> xt = x.transposed();
  Eigen::MatrixXd g(n, n);
  std::vector<double> col(n);
  // column j gets rows i <= j from the SIMD kernel; the rest is mirrored
  for (std::size_t j = 0; j < n; ++j) {
    kernel_column(k, xt, n, x.cols(), x.row(j), col);
    for (std::size_t i = 0; i <= j; ++i) {
      g(i, j) = col[i];
      g(j, i) = col[i];
    }
  }
  return g;
}

Eigen::MatrixXd cross_gram(const Kernel& k, const Dataset& x, const Dataset& z) {
  check_domain(k, x);
  check_domain(k, z);
  if (k.kind != KernelKind::Sobolev1 && x.rows() > 0 && z.rows() > 0 && x.cols() != z.cols())
    throw DomainError("cross_gram: datasets differ in dimension");
  const std::vector<double> xt = x.transposed();
  Eigen::MatrixXd g(x.rows(), z.rows());
  for (std::size_t j = 0; j < z.rows(); ++j)
    kernel_column(k, xt, x.rows(), x.cols(), z.row(j),
                  std::span<double>(g.col(static_cast<Eigen::Index>(j)).data(), x.rows()));
  return g;
}

}  // namespace krglm
