#pragma once

#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "krglm/dataset.hpp"

namespace krglm {

enum class KernelKind { Linear, Affine, Polynomial, Sobolev1 };

// Linear: x'z   Affine: 1 + x'z   Polynomial(m): (1 + x'z)^m   Sobolev1: min(x, z) on [0,1]
struct Kernel {
  KernelKind kind = KernelKind::Linear;
  int degree = 1;  // Polynomial only

  static Kernel linear() { return {KernelKind::Linear, 1}; }
  static Kernel affine() { return {KernelKind::Affine, 1}; }
  static Kernel polynomial(int degree);
  static Kernel sobolev1() { return {KernelKind::Sobolev1, 1}; }

  friend bool operator==(const Kernel&, const Kernel&) = default;
};

std::string kernel_name(const Kernel& k);  // "linear", "affine", "polynomial:3", "sobolev1"
Kernel parse_kernel(std::string_view name, int degree = 2);

// Throws DomainError when the dataset lies outside the kernel's domain.
void check_domain(const Kernel& k, const Dataset& x);

double eval(const Kernel& k, std::span<const double> x, std::span<const double> z);

// K_ij = K(x_i, x_j); each unordered pair is evaluated once and mirrored.
Eigen::MatrixXd gram(const Kernel& k, const Dataset& x);
// entry (i, j) = K(x_i, z_j)
Eigen::MatrixXd cross_gram(const Kernel& k, const Dataset& x, const Dataset& z);

// Kernel values K(x_j, z) for all rows of x, through the SIMD column kernels.
// xt is x.transposed(); out has x.rows() entries.
void kernel_column(const Kernel& k, std::span<const double> xt, std::size_t rows,
                   std::size_t cols, std::span<const double> z, std::span<double> out);

}  // namespace krglm
