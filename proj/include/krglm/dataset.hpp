#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace krglm {

// n x d covariate matrix (row-major) with an optional response per row.
class Dataset {
public:
  Dataset() = default;
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> covariates,
          std::optional<std::vector<double>> responses = std::nullopt);

  static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                           std::optional<std::vector<double>> responses = std::nullopt);
  static Dataset column(std::span<const double> values,
                        std::optional<std::vector<double>> responses = std::nullopt);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {x_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const { return x_[i * cols_ + j]; }
  const std::vector<double>& covariates() const noexcept { return x_; }

  bool has_responses() const noexcept { return y_.has_value(); }
  // Throws InputError when the dataset is unlabeled.
  std::span<const double> responses() const;

  Dataset subset(std::span<const std::size_t> indices) const;
  Dataset unlabeled() const;
  Dataset with_responses(std::vector<double> responses) const;

  // Feature-major copy (d x n), the layout the column kernels read.
  std::vector<double> transposed() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> x_;
  std::optional<std::vector<double>> y_;
};

}  // namespace krglm
