#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "krglm/crossval.hpp"
#include "krglm/error.hpp"
#include "krglm/random.hpp"
#include "krglm/selection.hpp"
#include "krglm/shift_lab.hpp"
#include "model_io.hpp"
#include "pool.hpp"
#include "svg.hpp"
#include "table.hpp"

namespace krglm::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) throw InputError(what + ": bad number '" + s + "'");
  return v;
}

Kernel make_kernel(const std::string& name, int degree) { return parse_kernel(name, degree); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError(dir + ": cannot create directory (" + ec.message() + ")");
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

int cmd_fit(const FitArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const auto table = read_table(a.data, c.label_col, LabelPolicy::Required);
  const auto family = parse_family(a.family);
  const auto kernel = make_kernel(a.kernel, a.degree);
  const auto model = fit_krglm(table.data, family, kernel, a.lambda);
  save_model(a.out, model);
  out << "fit family=" << family_name(family) << " kernel=" << kernel_name(kernel)
      << " lambda=" << fmt(a.lambda) << " n=" << table.data.rows()
      << " iterations=" << model.iterations << " converged=" << (model.converged ? 1 : 0)
      << " objective=" << fmt(model.objective()) << '\n';
  if (!model.converged) err << "warning: IRLS did not converge\n";
  return 0;
}

int cmd_select(const SelectArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const auto source = read_table(a.source, c.label_col, LabelPolicy::Required);
  const auto target = read_table(a.target, c.label_col, LabelPolicy::Optional);
  if (source.features.size() != target.features.size())
    throw InputError("select: source has " + std::to_string(source.features.size()) +
                     " features, target has " + std::to_string(target.features.size()));
  const auto family = parse_family(a.family);
  const auto kernel = make_kernel(a.kernel, a.degree);
  const std::size_t n = source.data.rows();
  const std::size_t n0 = target.data.rows();

  std::vector<SelectionRule> rules;
  std::vector<std::string> names;
  for (const auto& r : split_list(a.rules)) {
    if (std::find(names.begin(), names.end(), r) != names.end()) continue;
    if (r == "pseudo") {
      rules.push_back(SelectionRule::pseudo());
    } else if (r == "naive") {
      rules.push_back(SelectionRule::naive());
    } else if (r == "oracle") {
      if (!a.truth_scores.empty()) {
        rules.push_back(SelectionRule::oracle_scores(read_column(a.truth_scores)));
      } else if (target.data.has_responses()) {
        const auto y0 = target.data.responses();
        rules.push_back(SelectionRule::oracle_labels({y0.begin(), y0.end()}));
      } else {
        throw InputError("select: --rule oracle needs target labels or --truth-scores");
      }
    } else {
      throw InputError("select: unknown rule '" + r + "' (pseudo, oracle, naive)");
    }
    names.push_back(r);
  }
  if (rules.empty()) throw InputError("select: no rule given");

  GridStyle style;
  if (a.grid_style == "experiment")
    style = GridStyle::Experiment;
  else if (a.grid_style == "theorem")
    style = GridStyle::Theorem;
  else
    throw InputError("select: unknown grid style '" + a.grid_style + "'");

  SelectionConfig cfg;
  if (!a.grid.empty()) {
    for (const auto& g : split_list(a.grid)) cfg.grid.push_back(parse_number(g, "--grid"));
  } else {
    cfg.grid = default_candidate_grid(n, style, a.mu2);
  }
  cfg.imputer_lambda = a.imputer_lambda > 0
                           ? a.imputer_lambda
                           : default_imputer_lambda(static_cast<double>(n), style, a.mu2,
                                                    static_cast<double>(n0), a.delta);
  if (!(a.n1_frac > 0 && a.n1_frac < 1)) throw InputError("select: --n1-frac must lie in (0, 1)");
  if (n < 2) throw InputError("select: need at least two source rows");
  cfg.n1 = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(a.n1_frac * static_cast<double>(n))), 1, n - 1);
  cfg.seed = c.seed;

  const auto reports = select_rules(source.data, target.data.unlabeled(), family, kernel, cfg, rules);

  std::ostringstream csv;
  csv << "lambda,converged";
  for (const auto& nm : names) csv << ",risk_" << nm;
  for (const auto& nm : names) csv << ",chosen_" << nm;
  csv << '\n';
  const auto& grid = reports.front().grid;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    csv << fmt(grid[j]) << ',' << (reports.front().converged[j] ? 1 : 0);
    for (const auto& r : reports) csv << ',' << fmt(r.risks[j]);
    for (const auto& r : reports) csv << ',' << (r.chosen_index == j ? 1 : 0);
    csv << '\n';
  }
  write_file(a.report, csv.str());
  save_model(a.model, reports.front().chosen_model);

  if (!a.imputer_out.empty()) {
    const auto it = std::find_if(reports.begin(), reports.end(),
                                 [](const auto& r) { return r.imputer.has_value(); });
    if (it == reports.end()) throw InputError("select: --imputer-out needs --rule pseudo");
    std::ostringstream s;
    s << "score\n";
    for (double v : predict_score(*it->imputer, target.data.unlabeled())) s << fmt(v) << '\n';
    write_file(a.imputer_out, s.str());
  }

  std::size_t warnings = 0;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    out << "chosen rule=" << names[r] << " lambda=" << fmt(reports[r].chosen_lambda)
        << " index=" << reports[r].chosen_index << '\n';
    for (const auto& w : reports[r].warnings) err << "warning: " << names[r] << ": " << w << '\n';
    warnings += reports[r].warnings.size();
  }
  out << "warnings=" << warnings << '\n';
  return 0;
}

int cmd_synth(const SynthArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  std::vector<std::size_t> ns;
  for (const auto& s : split_list(a.n_list)) {
    const double v = parse_number(s, "--n-list");
    if (!(v >= 2) || v != std::floor(v) || std::fmod(v, 2.0) != 0.0)
      throw InputError("synth: sample sizes must be even integers >= 2, got '" + s + "'");
    ns.push_back(static_cast<std::size_t>(v));
  }
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.size() < 2) throw InputError("synth: --n-list needs at least two distinct sizes");
  if (a.trials < 1) throw InputError("synth: --trials must be positive");
  if (a.bootstrap < 1) throw InputError("synth: --bootstrap must be positive");
  ensure_dir(a.out);

  const std::size_t trials = static_cast<std::size_t>(a.trials);
  const std::size_t tasks = ns.size() * trials;
  std::vector<std::optional<SyntheticTrialResult>> results(tasks);
  std::vector<std::string> failures(tasks);
  parallel_for(tasks, c.jobs, [&](std::size_t t) {
    const std::size_t n = ns[t / trials];
    SyntheticScenario sc;
    sc.n = n;
    sc.shift_exponent = a.shift_exponent;
    sc.seed = derive_seed(derive_seed(c.seed, n), t % trials);
    try {
      results[t] = run_synthetic_trial(sc);
    } catch (const std::exception& e) {
      failures[t] = e.what();
    }
  });

  static constexpr std::array<const char*, 3> kRules{"pseudo", "oracle", "naive"};
  std::ostringstream csv;
  csv << "n,trial,rule,excess_risk\n";
  std::array<std::vector<TrialGroup>, 3> groups;
  std::size_t failed = 0, warnings = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    for (auto& g : groups) g.push_back({static_cast<double>(ns[i]), {}});
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& r = results[i * trials + t];
      if (!r) {
        ++failed;
        err << "warning: n=" << ns[i] << " trial=" << t << " failed: " << failures[i * trials + t]
            << '\n';
        continue;
      }
      warnings += r->warnings;
      const std::array<double, 3> v{r->pseudo, r->oracle, r->naive};
      for (std::size_t k = 0; k < 3; ++k) {
        csv << ns[i] << ',' << t << ',' << kRules[k] << ',' << fmt(v[k]) << '\n';
        groups[k].back().risks.push_back(v[k]);
      }
    }
  }
  write_file(join(a.out, "results.csv"), csv.str());
  if (warnings > 0) err << "warning: " << warnings << " solver warnings across trials\n";
  if (10 * failed > tasks) {
    err << "error: " << failed << " of " << tasks << " trials failed\n";
    return 3;
  }
  for (const auto& g : groups[0])
    if (g.risks.empty()) {
      err << "error: every trial failed at n=" << g.n << '\n';
      return 3;
    }

  std::ostringstream sum;
  sum << "rule,alpha,alpha_se,intercept";
  for (std::size_t n : ns) sum << ",mean_n" << n;
  sum << '\n';
  std::vector<SeriesPlot> plots;
  static constexpr std::array<const char*, 3> kColors{"#1f77b4", "#2ca02c", "#d62728"};
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& g : groups[k]) pts.push_back({g.n, mean_of(g.risks)});
    const auto fit = loglog_slope_fit(pts);
    const double se = cluster_bootstrap_se(groups[k], a.bootstrap, derive_seed(c.seed, 1000 + k));
    sum << kRules[k] << ',' << fmt(fit.alpha) << ',' << fmt(se) << ',' << fmt(fit.intercept);
    for (const auto& p : pts) sum << ',' << fmt(p.second);
    sum << '\n';
    out << kRules[k] << ": alpha=" << fmt(fit.alpha) << " se=" << fmt(se) << '\n';

    SeriesPlot plot{kRules[k], kColors[k], {}, fit.alpha, fit.intercept};
    for (const auto& g : groups[k])
      for (double r : g.risks) plot.points.push_back({g.n, r});
    plots.push_back(std::move(plot));
  }
  write_file(join(a.out, "summary.csv"), sum.str());
  if (a.svg) write_file(join(a.out, "figure.svg"), loglog_svg(plots, "excess risk vs n"));
  out << "trials=" << tasks - failed << " failed=" << failed << " warnings=" << warnings << '\n';
  return 0;
}

int cmd_real(const RealArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const auto table = read_table(a.data, c.label_col, LabelPolicy::Required);
  const auto y = table.data.responses();
  if (!is_binary(y)) throw InputError("real: label column '" + c.label_col + "' must be 0/1");
  if (a.seeds < 1) throw InputError("real: --seeds must be positive");
  if (a.folds < 2) throw InputError("real: --K must be at least 2");
  if (a.repeats < 1) throw InputError("real: --R must be at least 1");
  if (!(a.ood_split > 0 && a.ood_split < 1))
    throw InputError("real: --ood-split must lie in (0, 1)");
  if (!(a.lambda_min > 0) || !(a.lambda_max >= a.lambda_min))
    throw InputError("real: need 0 < --lambda-min <= --lambda-max");
  if (a.grid_points < 1) throw InputError("real: --grid-points must be positive");
  if (!(a.imputer_lambda > 0)) throw InputError("real: --imputer-lambda must be positive");
  const auto kernel = make_kernel(a.kernel, a.degree);

  // standardize on the full data, before the shift is constructed
  const std::size_t n = table.data.rows(), d = table.data.cols();
  std::vector<double> x = table.data.covariates();
  for (std::size_t j = 0; j < d; ++j) {
    double mu = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += x[i * d + j];
    mu /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) ss += (x[i * d + j] - mu) * (x[i * d + j] - mu);
    double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (!(sd > 0)) {
      err << "warning: feature '" << table.features[j] << "' is constant\n";
      sd = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) x[i * d + j] = (x[i * d + j] - mu) / sd;
  }
  const Dataset data(n, d, std::move(x), std::vector<double>(y.begin(), y.end()));

  std::vector<double> grid;
  for (int j = 0; j < a.grid_points; ++j) {
    const double t = a.grid_points == 1 ? 0.0 : static_cast<double>(j) / (a.grid_points - 1);
    grid.push_back(a.lambda_min * std::pow(a.lambda_max / a.lambda_min, t));
  }

  struct SeedResult {
    std::array<double, 3> risk{};
    std::array<double, 3> lambda{};
    std::size_t warnings = 0;
  };
  const std::size_t seeds = static_cast<std::size_t>(a.seeds);
  std::vector<std::optional<SeedResult>> results(seeds);
  std::vector<std::string> failures(seeds);
  parallel_for(seeds, c.jobs, [&](std::size_t s) {
    const auto base = derive_seed(c.seed, s);
    try {
      const auto split = rejection_split(data, {a.l, a.pivot}, derive_seed(base, 0));
      const std::size_t m = split.ood.rows();
      if (m < 2) throw InputError("fewer than two OOD rows");
      if (split.id.rows() < static_cast<std::size_t>(a.folds))
        throw InputError("fewer ID rows than folds");
      const std::size_t m_sel = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::llround(a.ood_split * static_cast<double>(m))), 1, m - 1);
      const auto [sel_idx, test_idx] = split_indices(m, m_sel, derive_seed(base, 1));
      const Dataset sel = split.ood.subset(sel_idx);
      const Dataset test = split.ood.subset(test_idx);
      const auto plan = FoldPlan::build(split.id.responses(), a.folds, a.repeats, derive_seed(base, 2));

      CvConfig cfg;
      cfg.grid = grid;
      cfg.imputer_lambda = a.imputer_lambda;
      const auto sel_y = sel.responses();
      const auto rep = cv_select(split.id, sel.unlabeled(),
                                 std::vector<double>(sel_y.begin(), sel_y.end()),
                                 Family::Logistic, kernel, cfg, plan);
      SeedResult r;
      for (int k = 0; k < 3; ++k) {
        r.risk[k] = glm_risk(predict_score(*rep.refits[k], test.unlabeled()), test.responses(),
                             Family::Logistic);
        r.lambda[k] = rep.chosen_lambda[k];
      }
      r.warnings = rep.warnings.size();
      results[s] = r;
    } catch (const std::exception& e) {
      failures[s] = e.what();
    }
  });

  static constexpr std::array<const char*, 3> kNames{"naive", "pseudo-labeling", "oracle"};
  std::ostringstream per;
  per << "seed,rule,lambda,test_risk\n";
  std::array<std::vector<double>, 3> risks;
  std::size_t failed = 0, warnings = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    if (!results[s]) {
      ++failed;
      err << "warning: seed " << s << " failed: " << failures[s] << '\n';
      continue;
    }
    warnings += results[s]->warnings;
    for (int k = 0; k < 3; ++k) {
      per << s << ',' << kNames[k] << ',' << fmt(results[s]->lambda[k]) << ','
          << fmt(results[s]->risk[k]) << '\n';
      risks[k].push_back(results[s]->risk[k]);
    }
  }
  ensure_dir(a.out);
  write_file(join(a.out, "per_seed.csv"), per.str());
  if (warnings > 0) err << "warning: " << warnings << " solver warnings across seeds\n";
  if (10 * failed > seeds || risks[0].empty()) {
    err << "error: " << failed << " of " << seeds << " seeds failed\n";
    return 3;
  }

  const std::size_t ok = risks[0].size();
  if (ok == 1) err << "warning: a single seed gives no spread; SE reported as 0\n";
  std::ostringstream sum;
  sum << "rule,mean,ci_lo,ci_hi,se\n";
  for (int k = 0; k < 3; ++k) {
    const double mu = mean_of(risks[k]);
    double ss = 0.0;
    for (double v : risks[k]) ss += (v - mu) * (v - mu);
    const double se = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1) / static_cast<double>(ok)) : 0.0;
    sum << kNames[k] << ',' << fmt(mu) << ',' << fmt(mu - 1.96 * se) << ',' << fmt(mu + 1.96 * se)
        << ',' << fmt(se) << '\n';
    out << kNames[k] << ": mean=" << fmt(mu) << " se=" << fmt(se) << '\n';
  }
  write_file(join(a.out, "summary.csv"), sum.str());
  out << "seeds=" << ok << " failed=" << failed << " warnings=" << warnings << '\n';
  return 0;
}

int cmd_neff(const NeffArgs& a, const Common& c, std::ostream& out, std::ostream&) {
  const auto source = read_table(a.source, c.label_col, LabelPolicy::Ignore);
  const auto target = read_table(a.target, c.label_col, LabelPolicy::Ignore);
  const auto kernel = make_kernel(a.kernel, a.degree);
  check_domain(kernel, source.data);
  check_domain(kernel, target.data);
  const double ne = effective_sample_size(source.data, target.data, kernel, a.c);
  const double n = static_cast<double>(source.data.rows());
  out << "n_eff=" << fmt(ne) << '\n' << "n=" << source.data.rows() << '\n'
      << "ratio=" << fmt(ne / n) << '\n';
  return 0;
}

}  // namespace krglm::cli
