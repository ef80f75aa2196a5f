#include "krglm/shift_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "krglm/error.hpp"
#include "krglm/random.hpp"

namespace krglm {

namespace {

double draw_mixture(Rng& rng, double weight_low) {
  const bool low = rng.uniform() < weight_low;
  const double u = rng.uniform();
  return low ? 0.5 * u : 0.5 + 0.5 * u;
}

}  // namespace

double synthetic_truth(double x) { return 1.5 * std::cos(2.0 * std::numbers::pi * x); }

double SyntheticScenario::shift_strength() const {
  return std::pow(static_cast<double>(n), shift_exponent);
}

SyntheticSample gen_synthetic(const SyntheticScenario& scenario) {
  if (scenario.n < 2 || scenario.n % 2 != 0)
    throw InputError("gen_synthetic: n must be even and at least 2");
  const double b = scenario.shift_strength();
  const double source_low = b / (b + 1.0);
  Rng rng(scenario.seed);

  std::vector<double> x(scenario.n), y(scenario.n);
  for (std::size_t i = 0; i < scenario.n; ++i) {
    x[i] = draw_mixture(rng, source_low);
    y[i] = rng.bernoulli(mean(Family::Logistic, synthetic_truth(x[i]))) ? 1.0 : 0.0;
  }
  std::vector<double> x0(scenario.n), truth(scenario.n);
  for (std::size_t i = 0; i < scenario.n; ++i) {
    x0[i] = draw_mixture(rng, 1.0 - source_low);
    truth[i] = synthetic_truth(x0[i]);
  }
  return {Dataset::column(x, std::move(y)), Dataset::column(x0), std::move(truth)};
}

std::pair<Dataset, std::vector<double>> synthetic_target_sample(const SyntheticScenario& scenario,
                                                                std::size_t m,
                                                                std::uint64_t seed) {
  const double b = scenario.shift_strength();
  Rng rng(seed);
  std::vector<double> x(m), truth(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = draw_mixture(rng, 1.0 / (b + 1.0));
    truth[i] = synthetic_truth(x[i]);
  }
  return {Dataset::column(x), std::move(truth)};
}

RejectionSplit rejection_split(const Dataset& data, const RejectionSplitSpec& spec,
                               std::uint64_t seed) {
  if (!(spec.l > 0) || !std::isfinite(spec.l))
    throw DomainError("rejection_split: l must be positive");
  if (data.empty()) throw InputError("rejection_split: empty dataset");
  if (spec.pivot >= data.cols()) throw InputError("rejection_split: pivot column out of range");

  double c = data(0, spec.pivot);
  for (std::size_t i = 1; i < data.rows(); ++i) c = std::min(c, data(i, spec.pivot));

  Rng rng(seed);
  RejectionSplit out;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double d = data(i, spec.pivot) - c;
    const double p = std::min(1.0, d * d / spec.l);
    (rng.bernoulli(p) ? out.ood_rows : out.id_rows).push_back(i);
  }
  out.id = data.subset(out.id_rows);
  out.ood = data.subset(out.ood_rows);
  return out;
}

double excess_risk(std::span<const double> scores, std::span<const double> truth_scores,
                   Family family) {
  if (scores.size() != truth_scores.size())
    throw InputError("excess_risk: scores and truth differ in length");
  if (scores.empty()) throw InputError("excess_risk: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) s += bregman(family, scores[i], truth_scores[i]);
  return s / static_cast<double>(scores.size());
}

double excess_risk(const FittedModel& model, const Dataset& target_x,
                   std::span<const double> truth_scores) {
  if (target_x.rows() != truth_scores.size())
    throw InputError("excess_risk: target rows and truth differ in length");
  return excess_risk(predict_score(model, target_x), truth_scores, model.family);
}

double effective_sample_size(const Dataset& source_x, const Dataset& target_x,
                             const Kernel& kernel, double c) {
  if (!(c > 0) || !std::isfinite(c)) throw DomainError("effective_sample_size: c must be positive");
  if (source_x.empty() || target_x.empty())
    throw InputError("effective_sample_size: empty dataset");
  const std::size_t n = source_x.rows();
  const std::size_t m = target_x.rows();

  // Joint Gram of [source; target]; its range is the span holding the maximizer.
  std::vector<double> joint = source_x.covariates();
  joint.insert(joint.end(), target_x.covariates().begin(), target_x.covariates().end());
  if (source_x.cols() != target_x.cols())
    throw DomainError("effective_sample_size: datasets differ in dimension");
  const Dataset all(n + m, source_x.cols(), std::move(joint));
  const Eigen::MatrixXd g = gram(kernel, all);

  // Orthonormal coordinates of the span: Phi U D^{-1/2}; feature i maps to D^{-1/2} U' G e_i.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  if (eig.info() != Eigen::Success)
    throw SolverError("effective_sample_size: Gram eigendecomposition failed", 0, 0.0);
  const Eigen::VectorXd& d = eig.eigenvalues();
  const double top = std::max(d.maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) > 1e-12 * top && d(i) > 0) keep.push_back(i);
  if (keep.empty()) return static_cast<double>(n);  // all features vanish: S0 = 0

  const auto r = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd coords(r, g.cols());  // r x (n + m)
  for (Eigen::Index t = 0; t < r; ++t) {
    const Eigen::Index i = keep[static_cast<std::size_t>(t)];
    coords.row(t) = std::sqrt(d(i)) * eig.eigenvectors().col(i).transpose();
  }
  const auto nn = static_cast<Eigen::Index>(n);
  const auto mm = static_cast<Eigen::Index>(m);
  const Eigen::MatrixXd cs = coords.leftCols(nn);
  const Eigen::MatrixXd ct = coords.rightCols(mm);

  // n S = C_s C_s' (the 1/n cancels), S0 = C_t C_t' / m
  const Eigen::MatrixXd a = ct * ct.transpose() / static_cast<double>(m);
  Eigen::MatrixXd bm = cs * cs.transpose();
  bm.diagonal().array() += c;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gen(a, bm);
  if (gen.info() != Eigen::Success)
    throw SolverError("effective_sample_size: generalized eigensolve failed", 0, 0.0);
  const double theta = gen.eigenvalues().maxCoeff();
  const double nd = static_cast<double>(n);
  if (!(theta > 0)) return nd;
  return std::min(nd, 1.0 / theta);
}

SlopeFit loglog_slope_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InputError("loglog_slope_fit: need at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [n, risk] : points) {
    if (!(n > 0)) throw DomainError("loglog_slope_fit: sample sizes must be positive");
    if (!(risk > 0)) throw DomainError("loglog_slope_fit: risks must be positive");
    mx += std::log(n);
    my += std::log(risk);
  }
  const double k = static_cast<double>(points.size());
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, risk] : points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(risk) - my);
  }
  if (!(sxx > 0)) throw DomainError("loglog_slope_fit: sample sizes must differ");
  const double slope = sxy / sxx;
  return {-slope, my - slope * mx};
}

double cluster_bootstrap_se(std::span<const TrialGroup> groups, int b, std::uint64_t seed) {
  if (b < 1) throw InputError("cluster_bootstrap_se: B must be at least 1");
  if (groups.size() < 2) throw InputError("cluster_bootstrap_se: need at least two sample sizes");
  for (const auto& g : groups)
    if (g.risks.empty()) throw InputError("cluster_bootstrap_se: empty trial list");

  Rng rng(seed);
  std::vector<double> alphas;
  alphas.reserve(static_cast<std::size_t>(b));
  std::vector<std::pair<double, double>> pts(groups.size());
  for (int rep = 0; rep < b; ++rep) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& risks = groups[g].risks;
      double s = 0.0;
      for (std::size_t t = 0; t < risks.size(); ++t) s += risks[rng.below(risks.size())];
      pts[g] = {groups[g].n, s / static_cast<double>(risks.size())};
    }
    alphas.push_back(loglog_slope_fit(pts).alpha);
  }
  double mu = 0.0;
  for (double a : alphas) mu += a;
  mu /= static_cast<double>(alphas.size());
  double ss = 0.0;
  for (double a : alphas) ss += (a - mu) * (a - mu);
  return alphas.size() > 1 ? std::sqrt(ss / static_cast<double>(alphas.size() - 1)) : 0.0;
}

SyntheticTrialResult run_synthetic_trial(const SyntheticScenario& scenario,
                                         const SolverOptions& solver) {
  const auto sample = gen_synthetic(scenario);
  const auto [eval_x, eval_truth] =
      synthetic_target_sample(scenario, scenario.n, derive_seed(scenario.seed, 1));

  SelectionConfig cfg;
  cfg.grid = default_candidate_grid(scenario.n, GridStyle::Experiment);
  cfg.imputer_lambda =
      default_imputer_lambda(static_cast<double>(scenario.n), GridStyle::Experiment);
  cfg.n1 = scenario.n / 2;
  cfg.seed = derive_seed(scenario.seed, 2);
  cfg.solver = solver;

  const std::array<SelectionRule, 3> rules{SelectionRule::pseudo(),
                                           SelectionRule::oracle_scores(sample.target_truth),
                                           SelectionRule::naive()};
  const auto reports = select_rules(sample.source, sample.target_x, Family::Logistic,
                                    Kernel::sobolev1(), cfg, rules);

  SyntheticTrialResult res;
  std::array<double*, 3> slots{&res.pseudo, &res.oracle, &res.naive};
  for (std::size_t r = 0; r < 3; ++r) {
    *slots[r] = excess_risk(reports[r].chosen_model, eval_x, eval_truth);
    res.chosen_lambda[r] = reports[r].chosen_lambda;
    res.warnings += reports[r].warnings.size();
  }
  return res;
}

}  // namespace krglm
