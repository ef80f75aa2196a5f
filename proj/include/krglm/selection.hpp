#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "krglm/dataset.hpp"
#include "krglm/family.hpp"
#include "krglm/kernel.hpp"
#include "krglm/solver.hpp"

namespace krglm {

// (1/m) sum_i [a(s_i) - t_i s_i]; targets may be labels or soft labels.
double glm_risk(std::span<const double> scores, std::span<const double> targets, Family family);

// Uniform random split into (D1, D2) with |D1| = n1.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            std::size_t n1,
                                                                            std::uint64_t seed);
std::pair<Dataset, Dataset> split_source(const Dataset& data, std::size_t n1, std::uint64_t seed);

enum class GridStyle { Theorem, Experiment };

// Theorem:    {2^(j-1) mu2 / n : 1 <= j <= ceil(log2 n) + 1}
// Experiment: {2^k / (10 n) : 0 <= k <= ceil(log2 (10 n))}
std::vector<double> default_candidate_grid(std::size_t n, GridStyle style, double mu2 = 1.0);

// Theorem:    mu2 log^7(n) log(n0 / delta) / n
// Experiment: 1 / (10 n)
double default_imputer_lambda(double n, GridStyle style, double mu2 = 1.0, double n0 = 0.0,
                              double delta = 0.1);

enum class RuleKind { Pseudo, Oracle, NaiveHoldout };

std::string_view rule_name(RuleKind kind);

struct SelectionRule {
  RuleKind kind = RuleKind::Pseudo;
  // Oracle: either true scores f*(x0) (targets a'(f*)) or observed target responses.
  std::vector<double> oracle_values;
  bool oracle_values_are_scores = true;
  // Pseudo: imputer scores on the target rows to use instead of a fitted imputer.
  std::optional<std::vector<double>> imputer_scores;

  static SelectionRule pseudo() { return {}; }
  static SelectionRule pseudo_with_imputer(std::vector<double> target_scores);
  static SelectionRule oracle_scores(std::vector<double> truth_scores);
  static SelectionRule oracle_labels(std::vector<double> target_responses);
  static SelectionRule naive() { return {RuleKind::NaiveHoldout, {}, true, std::nullopt}; }
};

struct SelectionReport {
  RuleKind rule = RuleKind::Pseudo;
  std::vector<double> grid;  // ascending
  std::vector<double> risks;
  std::vector<bool> converged;
  std::size_t chosen_index = 0;
  double chosen_lambda = 0.0;
  FittedModel chosen_model;
  std::optional<FittedModel> imputer;
  std::uint64_t split_seed = 0;
  std::vector<std::string> warnings;
};

struct SelectionConfig {
  std::vector<double> grid;
  double imputer_lambda = 0.0;
  std::size_t n1 = 0;  // 0: floor(n / 2)
  std::uint64_t seed = 0;
  SolverOptions solver;
};

// Index of the smallest risk; ties go to the smallest lambda.
std::size_t argmin_risk(std::span<const double> grid, std::span<const double> risks);

SelectionReport select(const Dataset& source, const Dataset& target_x, Family family,
                       const Kernel& kernel, const SelectionConfig& config,
                       const SelectionRule& rule);

// Several rules over one split and one set of candidate fits.
std::vector<SelectionReport> select_rules(const Dataset& source, const Dataset& target_x,
                                          Family family, const Kernel& kernel,
                                          const SelectionConfig& config,
                                          std::span<const SelectionRule> rules);

}  // namespace krglm
