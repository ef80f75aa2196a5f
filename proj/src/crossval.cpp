#include "krglm/crossval.hpp"

#include <algorithm>
#include <cmath>

#include "krglm/error.hpp"
#include "krglm/random.hpp"

namespace krglm {

bool is_binary(std::span<const double> labels) {
  return std::all_of(labels.begin(), labels.end(), [](double y) { return y == 0.0 || y == 1.0; });
}

std::vector<int> stratified_kfold(std::span<const double> labels, int k, std::uint64_t seed) {
  if (k < 2) throw InputError("stratified_kfold: K must be at least 2");
  if (labels.size() < static_cast<std::size_t>(k))
    throw InputError("stratified_kfold: fewer samples than folds");
  if (!is_binary(labels)) throw InputError("stratified_kfold: labels must be 0/1");

  Rng rng(seed);
  std::vector<int> fold(labels.size(), -1);
  int next = 0;
  for (double cls : {0.0, 1.0}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    shuffle(members, rng);
    for (std::size_t i : members) {
      fold[i] = next;
      next = (next + 1) % k;
    }
  }
  return fold;
}

std::vector<int> shuffled_kfold(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw InputError("kfold: K must be at least 2");
  if (n < static_cast<std::size_t>(k)) throw InputError("kfold: fewer samples than folds");
  Rng rng(seed);
  const auto perm = permutation(n, rng);
  std::vector<int> fold(n);
  for (std::size_t t = 0; t < n; ++t) fold[perm[t]] = static_cast<int>(t % static_cast<std::size_t>(k));
  return fold;
}

FoldPlan FoldPlan::build(std::span<const double> labels, int folds, int repeats,
                         std::uint64_t seed) {
  if (repeats < 1) throw InputError("fold plan: R must be at least 1");
  FoldPlan plan;
  plan.repeats = repeats;
  plan.folds = folds;
  plan.seed = seed;
  const bool binary = is_binary(labels);
  for (int r = 0; r < repeats; ++r) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(r));
    plan.assignment.push_back(binary ? stratified_kfold(labels, folds, s)
                                     : shuffled_kfold(labels.size(), folds, s));
  }
  return plan;
}

FoldPlan FoldPlan::from_assignments(std::vector<std::vector<int>> assignment, int folds) {
  if (assignment.empty()) throw InputError("fold plan: no repeats");
  FoldPlan plan;
  plan.repeats = static_cast<int>(assignment.size());
  plan.folds = folds;
  for (const auto& a : assignment)
    for (int f : a)
      if (f < 0 || f >= folds) throw InputError("fold plan: fold index out of range");
  plan.assignment = std::move(assignment);
  return plan;
}

std::vector<std::size_t> FoldPlan::candidate_indices(int repeat, int fold) const {
  std::vector<std::size_t> idx;
  const auto& a = assignment.at(static_cast<std::size_t>(repeat));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == fold) idx.push_back(i);
  return idx;
}

std::vector<std::size_t> FoldPlan::imputer_indices(int repeat, int fold) const {
  std::vector<std::size_t> idx;
  const auto& a = assignment.at(static_cast<std::size_t>(repeat));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != fold) idx.push_back(i);
  return idx;
}

CvReport cv_select(const Dataset& id_data, const Dataset& ood_sel_x,
                   const std::optional<std::vector<double>>& ood_sel_y, Family family,
                   const Kernel& kernel, const CvConfig& config, const FoldPlan& plan) {
  if (!id_data.has_responses()) throw InputError("cv_select: ID data must be labeled");
  if (config.grid.empty()) throw InputError("cv_select: empty candidate grid");
  if (config.rules[kCvOracle] && !ood_sel_y)
    throw InputError("cv_select: oracle rule requested without OOD selection labels");
  if (ood_sel_y && ood_sel_y->size() != ood_sel_x.rows())
    throw InputError("cv_select: OOD labels do not match OOD rows");
  for (const auto& a : plan.assignment)
    if (a.size() != id_data.rows()) throw InputError("cv_select: fold plan size mismatch");

  const bool uses_ood = config.rules[kCvPseudo] || config.rules[kCvOracle];
  const bool fits_imputer = config.rules[kCvPseudo] && !config.imputer_scores;
  if (uses_ood) {
    if (ood_sel_x.empty()) throw InputError("cv_select: OOD selection set is empty");
    check_domain(kernel, ood_sel_x);
  }
  if (fits_imputer && !(config.imputer_lambda > 0))
    throw DomainError("cv_select: imputer lambda must be positive");
  if (config.imputer_scores && config.imputer_scores->size() != ood_sel_x.rows())
    throw InputError("cv_select: imputer override length mismatch");

  CvReport rep;
  rep.grid = config.grid;
  std::sort(rep.grid.begin(), rep.grid.end());
  rep.grid.erase(std::unique(rep.grid.begin(), rep.grid.end()), rep.grid.end());
  rep.rules = config.rules;
  const std::size_t m = rep.grid.size();

  std::vector<double> override_labels;
  if (config.imputer_scores) {
    override_labels = *config.imputer_scores;
    for (double& t : override_labels) t = mean(family, t);
  }

  for (int r = 0; r < plan.repeats; ++r) {
    for (int k = 0; k < plan.folds; ++k) {
      const auto cand_idx = plan.candidate_indices(r, k);
      const auto imp_idx = plan.imputer_indices(r, k);
      if (cand_idx.empty() || imp_idx.empty())
        throw InputError("cv_select: fold " + std::to_string(k) + " of repeat " +
                         std::to_string(r) + " is degenerate");
      const Dataset cand = id_data.subset(cand_idx);
      const Dataset imp = id_data.subset(imp_idx);

      // Step 2a
      std::vector<double> pseudo;
      if (fits_imputer) {
        const FittedModel imputer = fit_krglm(imp, family, kernel, config.imputer_lambda,
                                              config.solver);
        if (!imputer.converged)
          rep.warnings.push_back("imputer did not converge in repeat " + std::to_string(r) +
                                 " fold " + std::to_string(k));
        pseudo = predict_mean(imputer, ood_sel_x);
      } else if (config.rules[kCvPseudo]) {
        pseudo = override_labels;
      }

      // Steps 2b and 2c
      std::array<std::vector<double>, 3> curve;
      for (double lambda : rep.grid) {
        const FittedModel cand_model = fit_krglm(cand, family, kernel, lambda, config.solver);
        if (!cand_model.converged)
          rep.warnings.push_back("candidate lambda=" + std::to_string(lambda) +
                                 " did not converge in repeat " + std::to_string(r) + " fold " +
                                 std::to_string(k));
        if (config.rules[kCvNaive])
          curve[kCvNaive].push_back(
              glm_risk(predict_score(cand_model, imp.unlabeled()), imp.responses(), family));
        if (uses_ood) {
          const auto scores = predict_score(cand_model, ood_sel_x);
          if (config.rules[kCvPseudo]) curve[kCvPseudo].push_back(glm_risk(scores, pseudo, family));
          if (config.rules[kCvOracle])
            curve[kCvOracle].push_back(glm_risk(scores, *ood_sel_y, family));
        }
      }
      for (int rule = 0; rule < 3; ++rule)
        if (config.rules[rule]) rep.fold_curves[rule].push_back(std::move(curve[rule]));
    }
  }

  // Steps 3-5
  const double folds_total = static_cast<double>(plan.repeats) * plan.folds;
  for (int rule = 0; rule < 3; ++rule) {
    if (!config.rules[rule]) continue;
    auto& avg = rep.curves[rule];
    avg.assign(m, 0.0);
    for (const auto& c : rep.fold_curves[rule])
      for (std::size_t j = 0; j < m; ++j) avg[j] += c[j];
    for (double& v : avg) v /= folds_total;
    rep.chosen_index[rule] = argmin_risk(rep.grid, avg);
    rep.chosen_lambda[rule] = rep.grid[rep.chosen_index[rule]];

    for (int prev = 0; prev < rule; ++prev)
      if (config.rules[prev] && rep.chosen_index[prev] == rep.chosen_index[rule]) {
        rep.refits[rule] = rep.refits[prev];
        break;
      }
    if (!rep.refits[rule])
      rep.refits[rule] = fit_krglm(id_data, family, kernel, rep.chosen_lambda[rule], config.solver);
  }
  return rep;
}

}  // namespace krglm
