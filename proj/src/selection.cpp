#include "krglm/selection.hpp"

#include <algorithm>
#include <cmath>

#include "krglm/error.hpp"
#include "krglm/random.hpp"

namespace krglm {

namespace {

int ceil_log2(double x) {
  int k = 0;
  double p = 1.0;
  while (p < x) {
    p *= 2.0;
    ++k;
  }
  return k;
}

std::vector<double> normalized_grid(std::span<const double> grid) {
  if (grid.empty()) throw InputError("select: empty candidate grid");
  std::vector<double> g(grid.begin(), grid.end());
  for (double l : g)
    if (!(l > 0) || !std::isfinite(l)) throw DomainError("select: grid values must be positive");
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

double glm_risk(std::span<const double> scores, std::span<const double> targets, Family family) {
  if (scores.size() != targets.size())
    throw InputError("glm_risk: " + std::to_string(scores.size()) + " scores vs " +
                     std::to_string(targets.size()) + " targets");
  if (scores.empty()) throw InputError("glm_risk: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    s += log_partition(family, scores[i]) - targets[i] * scores[i];
  return s / static_cast<double>(scores.size());
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            std::size_t n1,
                                                                            std::uint64_t seed) {
  if (n1 < 1 || n1 >= n)
    throw InputError("split_source: n1 = " + std::to_string(n1) + " must lie in [1, " +
                     std::to_string(n) + ")");
  Rng rng(seed);
  auto perm = permutation(n, rng);
  std::vector<std::size_t> first(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n1));
  std::vector<std::size_t> second(perm.begin() + static_cast<std::ptrdiff_t>(n1), perm.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

std::pair<Dataset, Dataset> split_source(const Dataset& data, std::size_t n1, std::uint64_t seed) {
  const auto [a, b] = split_indices(data.rows(), n1, seed);
  return {data.subset(a), data.subset(b)};
}

std::vector<double> default_candidate_grid(std::size_t n, GridStyle style, double mu2) {
  if (n < 2) throw InputError("candidate grid: n must be at least 2");
  std::vector<double> grid;
  if (style == GridStyle::Theorem) {
    if (!(mu2 > 0)) throw DomainError("candidate grid: mu2 must be positive");
    const int top = ceil_log2(static_cast<double>(n)) + 1;
    for (int j = 1; j <= top; ++j)
      grid.push_back(std::ldexp(mu2, j - 1) / static_cast<double>(n));
  } else {
    const double ten_n = 10.0 * static_cast<double>(n);
    const int top = ceil_log2(ten_n);
    for (int k = 0; k <= top; ++k) grid.push_back(std::ldexp(1.0, k) / ten_n);
  }
  return grid;
}

double default_imputer_lambda(double n, GridStyle style, double mu2, double n0, double delta) {
  if (!(n >= 2)) throw InputError("imputer lambda: n must be at least 2");
  if (style == GridStyle::Experiment) return 1.0 / (10.0 * n);
  if (!(mu2 > 0)) throw DomainError("imputer lambda: mu2 must be positive");
  if (!(delta > 0) || delta > std::exp(-1.0))
    throw DomainError("imputer lambda: delta must lie in (0, 1/e]");
  if (!(n0 > 0)) throw DomainError("imputer lambda: n0 must be positive");
  return mu2 * std::pow(std::log(n), 7) * std::log(n0 / delta) / n;
}

std::string_view rule_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::Pseudo: return "pseudo";
    case RuleKind::Oracle: return "oracle";
    case RuleKind::NaiveHoldout: return "naive";
  }
  return "unknown";
}

SelectionRule SelectionRule::pseudo_with_imputer(std::vector<double> target_scores) {
  SelectionRule r;
  r.imputer_scores = std::move(target_scores);
  return r;
}

SelectionRule SelectionRule::oracle_scores(std::vector<double> truth_scores) {
  return {RuleKind::Oracle, std::move(truth_scores), true, std::nullopt};
}

SelectionRule SelectionRule::oracle_labels(std::vector<double> target_responses) {
  return {RuleKind::Oracle, std::move(target_responses), false, std::nullopt};
}

std::size_t argmin_risk(std::span<const double> grid, std::span<const double> risks) {
  if (grid.size() != risks.size() || grid.empty()) throw InputError("argmin_risk: bad input");
  std::size_t best = 0;
  for (std::size_t j = 1; j < risks.size(); ++j) {
    if (risks[j] < risks[best] || (risks[j] == risks[best] && grid[j] < grid[best])) best = j;
  }
  return best;
}

std::vector<SelectionReport> select_rules(const Dataset& source, const Dataset& target_x,
                                          Family family, const Kernel& kernel,
                                          const SelectionConfig& config,
                                          std::span<const SelectionRule> rules) {
  if (rules.empty()) throw InputError("select: no rules requested");
  if (!source.has_responses()) throw InputError("select: source data must be labeled");
  const auto grid = normalized_grid(config.grid);
  const std::size_t n = source.rows();
  const std::size_t n1 = config.n1 > 0 ? config.n1 : n / 2;

  bool needs_target = false, needs_imputer = false;
  for (const auto& rule : rules) {
    if (rule.kind != RuleKind::NaiveHoldout) needs_target = true;
    if (rule.kind == RuleKind::Pseudo && !rule.imputer_scores) needs_imputer = true;
    if (rule.kind == RuleKind::Oracle && rule.oracle_values.size() != target_x.rows())
      throw InputError("select: oracle needs one truth value per target row");
    if (rule.kind == RuleKind::Pseudo && rule.imputer_scores &&
        rule.imputer_scores->size() != target_x.rows())
      throw InputError("select: imputer override needs one score per target row");
  }
  if (needs_target) {
    if (target_x.empty()) throw InputError("select: target covariates are empty");
    check_domain(kernel, target_x);
  }
  if (needs_imputer && !(config.imputer_lambda > 0))
    throw DomainError("select: imputer lambda must be positive");

  const auto [idx1, idx2] = split_indices(n, n1, config.seed);
  const Dataset d1 = source.subset(idx1);
  const Dataset d2 = source.subset(idx2);

  // Step 2a: candidates on D1
  std::vector<FittedModel> candidates;
  candidates.reserve(grid.size());
  std::size_t diverged = 0;
  for (double lambda : grid) {
    candidates.push_back(fit_krglm(d1, family, kernel, lambda, config.solver));
    if (!candidates.back().converged) ++diverged;
  }
  if (diverged == grid.size())
    throw SolverError("select: no candidate converged", config.solver.irls_max_iter, 0.0);

  std::vector<std::vector<double>> target_scores, holdout_scores;
  if (needs_target)
    for (const auto& c : candidates) target_scores.push_back(predict_score(c, target_x));
  for (const auto& rule : rules)
    if (rule.kind == RuleKind::NaiveHoldout) {
      for (const auto& c : candidates) holdout_scores.push_back(predict_score(c, d2.unlabeled()));
      break;
    }

  // Steps 2b and 3: imputer on D2, soft pseudo-labels on the target
  std::optional<FittedModel> imputer;
  std::vector<double> fitted_pseudo;
  if (needs_imputer) {
    imputer = fit_krglm(d2, family, kernel, config.imputer_lambda, config.solver);
    fitted_pseudo = predict_mean(*imputer, target_x);
  }

  std::vector<SelectionReport> reports;
  for (const auto& rule : rules) {
    SelectionReport rep;
    rep.rule = rule.kind;
    rep.grid = grid;
    rep.split_seed = config.seed;

    std::vector<double> targets;
    switch (rule.kind) {
      case RuleKind::Pseudo:
        if (rule.imputer_scores) {
          targets.resize(rule.imputer_scores->size());
          for (std::size_t i = 0; i < targets.size(); ++i)
            targets[i] = mean(family, (*rule.imputer_scores)[i]);
        } else {
          targets = fitted_pseudo;
          rep.imputer = imputer;
          if (!imputer->converged) rep.warnings.push_back("imputer did not converge");
        }
        break;
      case RuleKind::Oracle:
        targets = rule.oracle_values;
        if (rule.oracle_values_are_scores)
          for (double& t : targets) t = mean(family, t);
        break;
      case RuleKind::NaiveHoldout: break;
    }

    // Step 4: risk proxy per candidate
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double risk = rule.kind == RuleKind::NaiveHoldout
                              ? glm_risk(holdout_scores[j], d2.responses(), family)
                              : glm_risk(target_scores[j], targets, family);
      rep.risks.push_back(risk);
      rep.converged.push_back(candidates[j].converged);
      if (!candidates[j].converged)
        rep.warnings.push_back("candidate lambda=" + std::to_string(grid[j]) +
                               " did not converge");
    }
    rep.chosen_index = argmin_risk(rep.grid, rep.risks);
    rep.chosen_lambda = grid[rep.chosen_index];
    rep.chosen_model = candidates[rep.chosen_index];
    reports.push_back(std::move(rep));
  }
  return reports;
}

SelectionReport select(const Dataset& source, const Dataset& target_x, Family family,
                       const Kernel& kernel, const SelectionConfig& config,
                       const SelectionRule& rule) {
  return std::move(select_rules(source, target_x, family, kernel, config, {&rule, 1}).front());
}

}  // namespace krglm
