#pragma once

#include <functional>
#include <span>
#include <vector>

namespace krglm {

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

struct CgOptions {
  double tol = 1e-10;   // on ||A x - b|| / ||b||
  int max_iter = 1000;
  int stagnation_window = 50;
};

// Conjugate gradients for A x = b with A symmetric positive definite.
// x0 is an optional warm start; inv_diag an optional Jacobi preconditioner.
// Throws SolverError on breakdown (p'Ap <= 0), stagnation of the residual over
// stagnation_window iterations, or when max_iter is exhausted.
CgResult cg_solve(const LinearOperator& apply_a, std::span<const double> b, const CgOptions& opts,
                  std::span<const double> x0 = {}, std::span<const double> inv_diag = {});

}  // namespace krglm
