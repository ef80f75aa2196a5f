#include "krglm/dataset.hpp"

#include <cmath>
#include <string>

#include "krglm/error.hpp"

namespace krglm {

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> covariates,
                 std::optional<std::vector<double>> responses)
    : rows_(rows), cols_(cols), x_(std::move(covariates)), y_(std::move(responses)) {
  if (x_.size() != rows_ * cols_)
    throw InputError("dataset: covariate buffer has " + std::to_string(x_.size()) +
                     " entries, expected " + std::to_string(rows_ * cols_));
  for (std::size_t k = 0; k < x_.size(); ++k)
    if (!std::isfinite(x_[k]))
      throw InputError("dataset: non-finite covariate at row " + std::to_string(k / cols_) +
                       ", column " + std::to_string(k % cols_));
  if (y_) {
    if (y_->size() != rows_)
      throw InputError("dataset: " + std::to_string(y_->size()) + " responses for " +
                       std::to_string(rows_) + " rows");
    for (std::size_t i = 0; i < rows_; ++i)
      if (!std::isfinite((*y_)[i]))
        throw InputError("dataset: non-finite response at row " + std::to_string(i));
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows,
                           std::optional<std::vector<double>> responses) {
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  std::vector<double> x;
  x.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw InputError("dataset: ragged rows");
    x.insert(x.end(), r.begin(), r.end());
  }
  return Dataset(rows.size(), d, std::move(x), std::move(responses));
}

Dataset Dataset::column(std::span<const double> values,
                        std::optional<std::vector<double>> responses) {
  return Dataset(values.size(), 1, {values.begin(), values.end()}, std::move(responses));
}

std::span<const double> Dataset::responses() const {
  if (!y_) throw InputError("dataset has no responses");
  return *y_;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> x;
  x.reserve(indices.size() * cols_);
  std::optional<std::vector<double>> y;
  if (y_) y.emplace().reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= rows_) throw InputError("dataset subset: index out of range");
    const auto r = row(i);
    x.insert(x.end(), r.begin(), r.end());
    if (y) y->push_back((*y_)[i]);
  }
  return Dataset(indices.size(), cols_, std::move(x), std::move(y));
}

Dataset Dataset::unlabeled() const { return Dataset(rows_, cols_, x_); }

Dataset Dataset::with_responses(std::vector<double> responses) const {
  return Dataset(rows_, cols_, x_, std::move(responses));
}

std::vector<double> Dataset::transposed() const {
  std::vector<double> t(x_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = x_[i * cols_ + j];
  return t;
}

}  // namespace krglm
