#include <algorithm>
#include <random>

#include "doctest.h"
#include "krglm/crossval.hpp"
#include "krglm/error.hpp"
#include "krglm/random.hpp"
#include "test_helpers.hpp"

using namespace krglm;

namespace {

struct Problem {
  Dataset id;
  Dataset ood_x;
  std::vector<double> ood_y;
};

Problem logistic_problem(std::size_t n_id, std::size_t n_ood, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto draw = [&](std::size_t n, double shift) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = unif(gen) + shift, b = unif(gen);
      rows.push_back({a, b});
      const double p = 1.0 / (1.0 + std::exp(-(2.0 * a - b)));
      y.push_back(std::bernoulli_distribution(p)(gen) ? 1.0 : 0.0);
    }
    return Dataset::from_rows(rows, y);
  };
  auto id = draw(n_id, 0.0);
  auto ood = draw(n_ood, 1.0);
  const auto y = ood.responses();
  return {id, ood.unlabeled(), {y.begin(), y.end()}};
}

CvConfig default_config() {
  CvConfig cfg;
  cfg.grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  cfg.imputer_lambda = 1e-4;
  return cfg;
}

}  // namespace

TEST_CASE("stratified folds") {
  const std::vector<double> balanced{0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  const auto f = stratified_kfold(balanced, 5, 1);
  for (int k = 0; k < 5; ++k) {
    int zeros = 0, ones = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] == k) (balanced[i] == 0 ? zeros : ones)++;
    CHECK(zeros == 1);
    CHECK(ones == 1);
  }

  const std::vector<double> skewed{0, 0, 0, 0, 0, 0, 1, 1, 1};
  const auto g = stratified_kfold(skewed, 3, 2);
  for (int k = 0; k < 3; ++k) {
    int zeros = 0, ones = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] == k) (skewed[i] == 0 ? zeros : ones)++;
    CHECK(zeros == 2);
    CHECK(ones == 1);
  }

  // fold sizes and per-class counts differ by at most one
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + gen() % 60;
    const int k = 2 + static_cast<int>(gen() % 4);
    if (n < static_cast<std::size_t>(k)) continue;
    std::vector<double> y(n);
    for (double& v : y) v = (gen() % 3 == 0) ? 1.0 : 0.0;
    const auto a = stratified_kfold(y, k, gen());
    std::vector<int> size(k), ones(k);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(a[i] >= 0);
      REQUIRE(a[i] < k);
      ++size[a[i]];
      if (y[i] == 1.0) ++ones[a[i]];
    }
    CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
    CHECK(*std::max_element(ones.begin(), ones.end()) - *std::min_element(ones.begin(), ones.end()) <= 1);
  }

  CHECK(stratified_kfold(balanced, 5, 1) == f);
  CHECK_THROWS_AS(stratified_kfold(std::vector<double>{0, 1, 2}, 2, 1), InputError);
  CHECK_THROWS_AS(stratified_kfold(balanced, 1, 1), InputError);
  CHECK_THROWS_AS(stratified_kfold(balanced, 11, 1), InputError);
}

TEST_CASE("fold plan") {
  const std::vector<double> y{0, 1, 0, 1, 0, 1, 1, 1};
  const auto plan = FoldPlan::build(y, 2, 3, 17);
  REQUIRE(plan.assignment.size() == 3);
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 2; ++k) {
      auto c = plan.candidate_indices(r, k);
      auto i = plan.imputer_indices(r, k);
      CHECK(c.size() + i.size() == y.size());
      for (std::size_t a : c) CHECK(std::find(i.begin(), i.end(), a) == i.end());
    }
  CHECK(plan.assignment[0] == stratified_kfold(y, 2, derive_seed(17, 0)));
  CHECK_THROWS_AS(FoldPlan::from_assignments({{0, 1, 2}}, 2), InputError);
}

TEST_CASE("cross-validated selection") {
  const auto p = logistic_problem(120, 60, 5);
  const auto plan = FoldPlan::build(p.id.responses(), 2, 2, 8);
  const auto cfg = default_config();
  const auto rep = cv_select(p.id, p.ood_x, p.ood_y, Family::Logistic, Kernel::affine(), cfg, plan);

  for (int rule = 0; rule < 3; ++rule) {
    REQUIRE(rep.curves[rule].size() == 5);
    REQUIRE(rep.fold_curves[rule].size() == 4);
    CHECK(rep.chosen_lambda[rule] == rep.grid[rep.chosen_index[rule]]);
    REQUIRE(rep.refits[rule].has_value());
    CHECK(rep.refits[rule]->train_x.rows() == 120);
    CHECK(rep.refits[rule]->lambda == rep.chosen_lambda[rule]);
  }

  // the naive curve of one fold, recomputed by hand
  const Dataset cand = p.id.subset(plan.candidate_indices(1, 0));
  const Dataset imp = p.id.subset(plan.imputer_indices(1, 0));
  for (std::size_t j = 0; j < rep.grid.size(); ++j) {
    const auto m = fit_krglm(cand, Family::Logistic, Kernel::affine(), rep.grid[j]);
    const double naive = glm_risk(predict_score(m, imp.unlabeled()), imp.responses(),
                                  Family::Logistic);
    CHECK(std::abs(naive - rep.fold_curves[kCvNaive][2][j]) <= 1e-12);
    const double oracle = glm_risk(predict_score(m, p.ood_x), p.ood_y, Family::Logistic);
    CHECK(std::abs(oracle - rep.fold_curves[kCvOracle][2][j]) <= 1e-12);
  }

  // averaged curve is the mean of the fold curves
  for (std::size_t j = 0; j < rep.grid.size(); ++j) {
    double s = 0;
    for (const auto& c : rep.fold_curves[kCvPseudo]) s += c[j];
    CHECK(std::abs(s / 4.0 - rep.curves[kCvPseudo][j]) <= 1e-12);
  }

  const auto again = cv_select(p.id, p.ood_x, p.ood_y, Family::Logistic, Kernel::affine(), cfg, plan);
  CHECK(again.curves == rep.curves);
}

TEST_CASE("two folds, one repeat, one lambda") {
  const auto p = logistic_problem(40, 20, 6);
  const auto plan = FoldPlan::build(p.id.responses(), 2, 1, 1);
  auto cfg = default_config();
  cfg.grid = {0.01};
  const auto rep = cv_select(p.id, p.ood_x, p.ood_y, Family::Logistic, Kernel::affine(), cfg, plan);
  for (int rule = 0; rule < 3; ++rule) {
    CHECK(rep.chosen_index[rule] == 0);
    CHECK(rep.chosen_lambda[rule] == 0.01);
  }
  CHECK(rep.refits[0]->alpha == rep.refits[2]->alpha);
}

TEST_CASE("perfect imputer matches the oracle curve") {
  std::mt19937_64 gen(7);
  const auto x = testing::random_covariates(Kernel::affine(), 50, 2, gen);
  std::normal_distribution<double> normal;
  std::vector<double> y(50), y0(25);
  for (double& v : y) v = normal(gen);
  for (double& v : y0) v = normal(gen);
  const auto id = x.with_responses(y);
  const auto ood = testing::random_covariates(Kernel::affine(), 25, 2, gen);
  const auto plan = FoldPlan::build(y, 3, 2, 4);
  auto cfg = default_config();
  cfg.imputer_scores = y0;
  const auto rep = cv_select(id, ood, y0, Family::Gaussian, Kernel::affine(), cfg, plan);
  CHECK(rep.curves[kCvPseudo] == rep.curves[kCvOracle]);
  CHECK(rep.chosen_index[kCvPseudo] == rep.chosen_index[kCvOracle]);
}

TEST_CASE("repeating an identical partition changes nothing") {
  const auto p = logistic_problem(60, 30, 9);
  const auto a = stratified_kfold(p.id.responses(), 3, 2);
  const auto once = FoldPlan::from_assignments({a}, 3);
  const auto twice = FoldPlan::from_assignments({a, a}, 3);
  const auto cfg = default_config();
  const auto r1 = cv_select(p.id, p.ood_x, p.ood_y, Family::Logistic, Kernel::affine(), cfg, once);
  const auto r2 = cv_select(p.id, p.ood_x, p.ood_y, Family::Logistic, Kernel::affine(), cfg, twice);
  for (int rule = 0; rule < 3; ++rule) {
    for (std::size_t j = 0; j < r1.grid.size(); ++j)
      CHECK(std::abs(r1.curves[rule][j] - r2.curves[rule][j]) <= 1e-15);
    CHECK(r1.chosen_index[rule] == r2.chosen_index[rule]);
  }
}

TEST_CASE("naive cross-validation ignores OOD data") {
  std::mt19937_64 gen(10);
  const auto x = testing::random_covariates(Kernel::sobolev1(), 40, 1, gen);
  std::vector<double> y(40);
  for (std::size_t i = 0; i < 40; ++i) y[i] = x(i, 0) > 0.5 ? 1.0 : 0.0;
  const auto id = x.with_responses(y);
  const auto plan = FoldPlan::build(y, 2, 2, 3);
  auto cfg = default_config();
  cfg.rules = {true, false, false};
  const auto poison = Dataset::from_rows({{4.0}, {-2.0}});
  const auto clean_ood = testing::random_covariates(Kernel::sobolev1(), 10, 1, gen);
  const auto a = cv_select(id, poison, std::nullopt, Family::Logistic, Kernel::sobolev1(), cfg, plan);
  const auto b = cv_select(id, clean_ood, std::nullopt, Family::Logistic, Kernel::sobolev1(), cfg, plan);
  CHECK(a.curves[kCvNaive] == b.curves[kCvNaive]);
  CHECK(a.curves[kCvPseudo].empty());

  cfg.rules = {true, true, false};
  CHECK_THROWS_AS(cv_select(id, poison, std::nullopt, Family::Logistic, Kernel::sobolev1(), cfg, plan),
                  DomainError);
  cfg.rules = {true, true, true};
  CHECK_THROWS_AS(cv_select(id, clean_ood, std::nullopt, Family::Logistic, Kernel::sobolev1(), cfg, plan),
                  InputError);
}
