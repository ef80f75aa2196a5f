#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "krglm/dataset.hpp"
#include "krglm/family.hpp"
#include "krglm/kernel.hpp"
#include "krglm/selection.hpp"
#include "krglm/solver.hpp"

namespace krglm {

// f*(x) = 1.5 cos(2 pi x)
double synthetic_truth(double x);

// Logistic responses on [0,1] under a two-block mixture shift with
// B = n^shift_exponent:
//   source  P = B/(B+1) U[0,1/2] + 1/(B+1) U[1/2,1]
//   target  Q = 1/(B+1) U[0,1/2] + B/(B+1) U[1/2,1]
struct SyntheticScenario {
  std::size_t n = 0;
  double shift_exponent = 0.4;
  std::uint64_t seed = 0;

  double shift_strength() const;  // B
};

struct SyntheticSample {
  Dataset source;                     // labeled, n rows
  Dataset target_x;                   // n0 = n rows
  std::vector<double> target_truth;   // f*(x0)
};

SyntheticSample gen_synthetic(const SyntheticScenario& scenario);

// Fresh draw of m target covariates from Q, with their truth scores.
std::pair<Dataset, std::vector<double>> synthetic_target_sample(const SyntheticScenario& scenario,
                                                                std::size_t m,
                                                                std::uint64_t seed);

struct RejectionSplitSpec {
  double l = 3.0;
  std::size_t pivot = 0;
};

struct RejectionSplit {
  Dataset id;
  Dataset ood;
  std::vector<std::size_t> id_rows;
  std::vector<std::size_t> ood_rows;
};

// Row i goes to OOD with probability min(1, (x_i[pivot] - c)^2 / l),
// c = min_i x_i[pivot]. Rows are visited in order, one draw each.
RejectionSplit rejection_split(const Dataset& data, const RejectionSplitSpec& spec,
                               std::uint64_t seed);

// (1/n0) sum_i D_a(f(x0_i), f*(x0_i))
double excess_risk(std::span<const double> scores, std::span<const double> truth_scores,
                   Family family);
double excess_risk(const FittedModel& model, const Dataset& target_x,
                   std::span<const double> truth_scores);

// Empirical effective sample size: min(n, 1 / theta_max) where theta_max is the
// top generalized eigenvalue of  S0 v = theta (n S + c I) v, with S and S0 the
// empirical second-moment operators of the source and target feature maps.
double effective_sample_size(const Dataset& source_x, const Dataset& target_x,
                             const Kernel& kernel, double c = 1.0);

struct SlopeFit {
  double alpha = 0.0;      // minus the slope of log(risk) on log(n)
  double intercept = 0.0;
};

SlopeFit loglog_slope_fit(std::span<const std::pair<double, double>> points);

struct TrialGroup {
  double n = 0.0;
  std::vector<double> risks;
};

// Standard deviation of alpha over b resamples that redraw trials with
// replacement independently within each n.
double cluster_bootstrap_se(std::span<const TrialGroup> groups, int b, std::uint64_t seed);

// One replication of the synthetic experiment: split, candidates, the three
// selection rules, and each winner's excess risk on a fresh target sample.
struct SyntheticTrialResult {
  double pseudo = 0.0;
  double oracle = 0.0;
  double naive = 0.0;
  std::array<double, 3> chosen_lambda{};  // pseudo, oracle, naive
  std::size_t warnings = 0;
};

SyntheticTrialResult run_synthetic_trial(const SyntheticScenario& scenario,
                                         const SolverOptions& solver = {});

}  // namespace krglm
