#pragma once

#include <array>
#include <string>
#include <vector>

namespace krglm::cli {

struct SeriesPlot {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (n, risk) per trial
  double alpha = 0.0;
  double intercept = 0.0;
};

// Log-log scatter with one fitted line per series.
std::string loglog_svg(const std::vector<SeriesPlot>& series, const std::string& title);

}  // namespace krglm::cli
