#include "table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "krglm/error.hpp"

namespace krglm::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line,
                  const std::string& column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw InputError(path + ": line " + std::to_string(line) + ", column '" + column +
                     "': cannot parse '" + cell + "' as a finite number");
  return v;
}

}  // namespace

Table read_table(const std::string& path, const std::string& label_col, LabelPolicy policy) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw InputError(path + ": missing header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_line(line);

  std::optional<std::size_t> label_idx;
  if (policy != LabelPolicy::Ignore)
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == label_col) label_idx = j;
  if (policy == LabelPolicy::Required && !label_idx)
    throw InputError(path + ": no label column '" + label_col + "'");
  // an ignored label column is still not a feature
  std::optional<std::size_t> skip = label_idx;
  if (policy == LabelPolicy::Ignore)
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == label_col) skip = j;

  Table t;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (!skip || j != *skip) t.features.push_back(header[j]);
  if (t.features.empty()) throw InputError(path + ": no feature columns");

  std::vector<double> x, y;
  std::size_t rows = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw InputError(path + ": line " + std::to_string(lineno) + " has " +
                       std::to_string(cells.size()) + " fields, header has " +
                       std::to_string(header.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (skip && j == *skip) {
        if (label_idx) y.push_back(parse_cell(cells[j], path, lineno, header[j]));
        continue;
      }
      x.push_back(parse_cell(cells[j], path, lineno, header[j]));
    }
    ++rows;
  }
  if (rows == 0) throw InputError(path + ": no data rows");
  std::optional<std::vector<double>> labels;
  if (label_idx) labels = std::move(y);
  t.data = Dataset(rows, t.features.size(), std::move(x), std::move(labels));
  return t;
}

std::vector<double> read_column(const std::string& path) {
  const auto t = read_table(path, "", LabelPolicy::Ignore);
  if (t.features.size() != 1)
    throw InputError(path + ": expected a single column, found " +
                     std::to_string(t.features.size()));
  return t.data.covariates();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << contents;
  if (!out) throw InputError(path + ": write failed");
}

}  // namespace krglm::cli
