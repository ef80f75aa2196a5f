#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "krglm/dataset.hpp"
#include "krglm/family.hpp"
#include "krglm/kernel.hpp"
#include "krglm/selection.hpp"
#include "krglm/solver.hpp"

namespace krglm {

// Fold index in [0, k) per sample. Each class is shuffled and dealt
// round-robin, continuing the deal across classes, so fold sizes and per-class
// fold counts both differ by at most one. Labels must be 0/1.
std::vector<int> stratified_kfold(std::span<const double> labels, int k, std::uint64_t seed);

// Shuffled, unstratified assignment with fold sizes differing by at most one.
std::vector<int> shuffled_kfold(std::size_t n, int k, std::uint64_t seed);

bool is_binary(std::span<const double> labels);

struct FoldPlan {
  int repeats = 0;
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> assignment;  // [repeat][sample] -> fold

  // Stratified when the labels are binary, shuffled otherwise. Repeat r uses
  // the stream derive_seed(seed, r).
  static FoldPlan build(std::span<const double> labels, int folds, int repeats,
                        std::uint64_t seed);
  static FoldPlan from_assignments(std::vector<std::vector<int>> assignment, int folds);

  std::vector<std::size_t> candidate_indices(int repeat, int fold) const;  // F_k
  std::vector<std::size_t> imputer_indices(int repeat, int fold) const;    // complement
};

enum CvRule { kCvNaive = 0, kCvPseudo = 1, kCvOracle = 2 };
inline constexpr std::array<const char*, 3> kCvRuleNames{"naive", "pseudo", "oracle"};

struct CvConfig {
  std::vector<double> grid;
  double imputer_lambda = 0.0;
  std::array<bool, 3> rules{true, true, true};
  SolverOptions solver;
  // Replaces every per-fold imputer by fixed scores on the OOD selection rows.
  std::optional<std::vector<double>> imputer_scores;
};

struct CvReport {
  std::vector<double> grid;  // ascending
  std::array<bool, 3> rules{};
  std::array<std::vector<double>, 3> curves;     // averaged over all K R folds
  std::array<std::size_t, 3> chosen_index{};
  std::array<double, 3> chosen_lambda{};
  std::array<std::optional<FittedModel>, 3> refits;
  // fold_curves[rule][repeat * K + fold][lambda index]
  std::array<std::vector<std::vector<double>>, 3> fold_curves;
  std::vector<std::string> warnings;
};

CvReport cv_select(const Dataset& id_data, const Dataset& ood_sel_x,
                   const std::optional<std::vector<double>>& ood_sel_y, Family family,
                   const Kernel& kernel, const CvConfig& config, const FoldPlan& plan);

}  // namespace krglm
