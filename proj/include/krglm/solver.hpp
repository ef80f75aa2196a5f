#pragma once

#include <functional>
#include <span>
#include <vector>

#include "krglm/dataset.hpp"
#include "krglm/family.hpp"
#include "krglm/gram_operator.hpp"
#include "krglm/kernel.hpp"

namespace krglm {

struct SolverOptions {
  int irls_max_iter = 50;
  double irls_tol = 1e-8;   // sup-norm change of fitted scores, relative to max(1, |f|_inf)
  int cg_max_iter = 0;      // 0: 10 n, capped at 2000
  double cg_tol = 1e-10;
  double weight_floor = kWeightFloor;
  int max_halvings = 20;
  OperatorMode mode = OperatorMode::Auto;
  // Called with every accepted iterate (iteration 0 is the zero start).
  std::function<void(int iteration, std::span<const double> alpha, double objective)> observer;
};

// Ridge-regularized kernel GLM: f(.) = sum_i alpha_i K(x_i, .).
struct FittedModel {
  std::vector<double> alpha;
  Dataset train_x;
  Kernel kernel;
  Family family = Family::Gaussian;
  double lambda = 0.0;
  std::vector<double> fitted_scores;  // K alpha
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective_trace;  // objective after each accepted iterate

  double objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

// Fisher scoring / IRLS. Each step solves the symmetrized system
//   (S K S + n lambda I) u = S K W z,   S = W^{1/2},   f = S^{-1} u
// by conjugate gradients, with step halving whenever the objective would rise.
FittedModel fit_krglm(const Dataset& data, Family family, const Kernel& kernel, double lambda,
                      const SolverOptions& opts = {});

std::vector<double> predict_score(const FittedModel& model, const Dataset& z);
std::vector<double> predict_mean(const FittedModel& model, const Dataset& z);

// (1/n) (1' a(K alpha) - y' K alpha) + (lambda / 2) alpha' K alpha
double regularized_objective(const Dataset& data, Family family, const Kernel& kernel,
                             std::span<const double> alpha, double lambda);

}  // namespace krglm
