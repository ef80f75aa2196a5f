#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "krglm/error.hpp"

namespace krglm::cli {

namespace {

const std::vector<std::string> kCommands{"fit", "select", "synth", "real", "neff"};

// Flat key=value lines become "--key=value" tokens placed right after the
// subcommand, so later command-line flags win and unknown keys fail parsing.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InputError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open config file");
  std::vector<std::string> injected;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(path + ": line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty())
      throw InputError(path + ": line " + std::to_string(lineno) + ": empty key");
    injected.push_back("--" + key + "=" + value);
  }

  auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  if (sub == rest.end()) return rest;  // the parser reports the missing subcommand
  rest.insert(sub + 1, injected.begin(), injected.end());
  return rest;
}

template <class T>
CLI::Option* positive(CLI::App* app, const std::string& flag, T& value, const std::string& help) {
  return app->add_option(flag, value, help)->capture_default_str()->check(
      CLI::Validator([](std::string& s) -> std::string {
        try {
          if (std::stod(s) > 0) return {};
        } catch (const std::exception&) {
        }
        return "must be > 0, got " + s;
      }, "POSITIVE"));
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel GLM fitting and pseudo-labeling model selection under covariate shift",
               "krglm"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Common common;
  common.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string config_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value file; flags override it");
    sub->add_option("--seed", common.seed, "random seed")->envname("KRGLM_SEED")->capture_default_str();
    sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--label-col", common.label_col, "label column name")->capture_default_str();
  };

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit one kernel GLM and write the model");
  fit_cmd->add_option("--data", fit.data, "labeled CSV")->required();
  fit_cmd->add_option("--family", fit.family, "gaussian | logistic | poisson")->capture_default_str();
  fit_cmd->add_option("--kernel", fit.kernel, "linear | affine | polynomial | sobolev1")->capture_default_str();
  fit_cmd->add_option("--degree", fit.degree, "polynomial degree")->capture_default_str();
  positive(fit_cmd, "--lambda", fit.lambda, "ridge penalty")->required();
  fit_cmd->add_option("--out", fit.out, "model file")->capture_default_str();
  add_common(fit_cmd);

  SelectArgs sel;
  auto* sel_cmd = app.add_subcommand("select", "choose lambda by pseudo-labeling");
  sel_cmd->add_option("--source", sel.source, "labeled source CSV")->required();
  sel_cmd->add_option("--target", sel.target, "target CSV (labels optional)")->required();
  sel_cmd->add_option("--family", sel.family, "gaussian | logistic | poisson")->capture_default_str();
  sel_cmd->add_option("--kernel", sel.kernel, "linear | affine | polynomial | sobolev1")->capture_default_str();
  sel_cmd->add_option("--degree", sel.degree, "polynomial degree")->capture_default_str();
  sel_cmd->add_option("--rule", sel.rules, "comma list: pseudo, oracle, naive")->capture_default_str();
  sel_cmd->add_option("--truth-scores", sel.truth_scores, "one-column CSV of f*(x0) for the oracle");
  sel_cmd->add_option("--grid", sel.grid, "comma list of lambdas");
  sel_cmd->add_option("--grid-style", sel.grid_style, "experiment | theorem")->capture_default_str();
  positive(sel_cmd, "--mu2", sel.mu2, "scale of the theorem grid");
  sel_cmd->add_option("--imputer-lambda", sel.imputer_lambda, "imputer penalty (0: from grid style)");
  positive(sel_cmd, "--delta", sel.delta, "confidence level of the theorem imputer penalty");
  sel_cmd->add_option("--n1-frac", sel.n1_frac, "share of the source used for candidates")->capture_default_str();
  sel_cmd->add_option("--report", sel.report, "report CSV")->capture_default_str();
  sel_cmd->add_option("--model", sel.model, "model file for the first rule's choice")->capture_default_str();
  sel_cmd->add_option("--imputer-out", sel.imputer_out, "write imputer scores on the target");
  add_common(sel_cmd);

  SynthArgs syn;
  auto* syn_cmd = app.add_subcommand("synth", "synthetic covariate-shift replication");
  syn_cmd->add_option("--n-list", syn.n_list, "comma list of source sizes")->capture_default_str();
  syn_cmd->add_option("--trials", syn.trials, "trials per size")->check(CLI::PositiveNumber)->capture_default_str();
  syn_cmd->add_option("--shift-exponent", syn.shift_exponent, "B = n^exponent")->capture_default_str();
  syn_cmd->add_option("--bootstrap", syn.bootstrap, "bootstrap resamples")->check(CLI::PositiveNumber)->capture_default_str();
  syn_cmd->add_option("--out", syn.out, "output directory")->capture_default_str();
  syn_cmd->add_flag("--svg", syn.svg, "also write figure.svg");
  add_common(syn_cmd);

  RealArgs real;
  auto* real_cmd = app.add_subcommand("real", "repeated K-fold pseudo-labeling on a binary CSV");
  real_cmd->add_option("--data", real.data, "labeled CSV with 0/1 labels")->required();
  real_cmd->add_option("--kernel", real.kernel, "linear | affine | polynomial")->capture_default_str();
  real_cmd->add_option("--degree", real.degree, "polynomial degree")->capture_default_str();
  positive(real_cmd, "--l", real.l, "rejection scale");
  real_cmd->add_option("--pivot", real.pivot, "feature index driving the shift")->capture_default_str();
  real_cmd->add_option("--K", real.folds, "folds")->capture_default_str();
  real_cmd->add_option("--R", real.repeats, "repeats")->capture_default_str();
  real_cmd->add_option("--seeds", real.seeds, "independent seeds")->capture_default_str();
  real_cmd->add_option("--ood-split", real.ood_split, "OOD share used for selection")->capture_default_str();
  positive(real_cmd, "--lambda-min", real.lambda_min, "smallest candidate");
  positive(real_cmd, "--lambda-max", real.lambda_max, "largest candidate");
  real_cmd->add_option("--grid-points", real.grid_points, "geometric grid size")->capture_default_str();
  positive(real_cmd, "--imputer-lambda", real.imputer_lambda, "imputer penalty");
  real_cmd->add_option("--out", real.out, "output directory")->capture_default_str();
  add_common(real_cmd);

  NeffArgs neff;
  auto* neff_cmd = app.add_subcommand("neff", "empirical effective sample size");
  neff_cmd->add_option("--source", neff.source, "source CSV")->required();
  neff_cmd->add_option("--target", neff.target, "target CSV")->required();
  neff_cmd->add_option("--kernel", neff.kernel, "linear | affine | polynomial | sobolev1")->capture_default_str();
  neff_cmd->add_option("--degree", neff.degree, "polynomial degree")->capture_default_str();
  positive(neff_cmd, "--c", neff.c, "ridge constant");
  add_common(neff_cmd);

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, common, out, err);
    if (*sel_cmd) return cmd_select(sel, common, out, err);
    if (*syn_cmd) return cmd_synth(syn, common, out, err);
    if (*real_cmd) return cmd_real(real, common, out, err);
    if (*neff_cmd) return cmd_neff(neff, common, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const SolverError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace krglm::cli
