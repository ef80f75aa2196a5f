#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace krglm::cli {

struct Common {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string label_col = "label";
};

struct FitArgs {
  std::string data;
  std::string family = "logistic";
  std::string kernel = "affine";
  int degree = 2;
  double lambda = 0.0;
  std::string out = "model.txt";
};

struct SelectArgs {
  std::string source;
  std::string target;
  std::string family = "logistic";
  std::string kernel = "affine";
  int degree = 2;
  std::string rules = "pseudo";  // comma list of pseudo, oracle, naive
  std::string truth_scores;      // optional oracle truth f*(x0), one column
  std::string grid;              // comma list; overrides grid_style
  std::string grid_style = "experiment";
  double mu2 = 1.0;
  double imputer_lambda = 0.0;  // 0: from grid_style
  double delta = 0.1;
  double n1_frac = 0.5;
  std::string report = "select_report.csv";
  std::string model = "select_model.txt";
  std::string imputer_out;  // optional imputer scores on the target rows
};

struct SynthArgs {
  std::string n_list = "4000,8000,16000,32000";
  int trials = 100;
  double shift_exponent = 0.4;
  int bootstrap = 10000;
  std::string out = "synth_out";
  bool svg = false;
};

struct RealArgs {
  std::string data;
  std::string kernel = "affine";
  int degree = 2;
  double l = 3.0;
  std::size_t pivot = 0;
  int folds = 2;
  int repeats = 6;
  int seeds = 100;
  double ood_split = 0.5;
  double lambda_min = 1e-4;
  double lambda_max = 1e2;
  int grid_points = 13;
  double imputer_lambda = 1e-4;
  std::string out = "real_out";
};

struct NeffArgs {
  std::string source;
  std::string target;
  std::string kernel = "affine";
  int degree = 2;
  double c = 1.0;
};

int cmd_fit(const FitArgs& a, const Common& c, std::ostream& out, std::ostream& err);
int cmd_select(const SelectArgs& a, const Common& c, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthArgs& a, const Common& c, std::ostream& out, std::ostream& err);
int cmd_real(const RealArgs& a, const Common& c, std::ostream& out, std::ostream& err);
int cmd_neff(const NeffArgs& a, const Common& c, std::ostream& out, std::ostream& err);

}  // namespace krglm::cli
