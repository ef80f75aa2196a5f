#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krglm/dataset.hpp"

namespace krglm::cli {

enum class LabelPolicy { Required, Optional, Ignore };

struct Table {
  std::vector<std::string> features;  // header names, label column removed
  Dataset data;
};

// Comma-separated, one header line. The label column is `label_col`; when
// absent the file is read as unlabeled (an error under LabelPolicy::Required).
Table read_table(const std::string& path, const std::string& label_col, LabelPolicy policy);

// A single column of values under a one-line header.
std::vector<double> read_column(const std::string& path);

// %.17g, enough to round-trip a double
std::string fmt(double v);

void write_file(const std::string& path, const std::string& contents);

}  // namespace krglm::cli
