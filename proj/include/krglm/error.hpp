#pragma once

#include <stdexcept>
#include <string>

namespace krglm {

/// Input outside the mathematical domain of an operation (non-finite scores,
/// Sobolev covariates outside [0,1], nonpositive penalties, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent caller input (length mismatches, bad files).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside an iterative solver.
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what + " (iterations=" + std::to_string(iterations) +
                           ", relative residual=" + std::to_string(residual) + ")"),
        iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

private:
  int iterations_;
  double residual_;
};

}  // namespace krglm
