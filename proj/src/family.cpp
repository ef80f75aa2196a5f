#include "krglm/family.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "krglm/error.hpp"

namespace krglm {

namespace {

void require_finite(double u, const char* what) {
  if (!std::isfinite(u)) throw DomainError(std::string(what) + ": non-finite argument");
}

void require_poisson_cap(double u, const char* what) {
  if (u > kPoissonScoreCap)
    throw DomainError(std::string(what) + ": Poisson score " + std::to_string(u) +
                      " exceeds cap " + std::to_string(kPoissonScoreCap));
}

double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Logistic: return "logistic";
    case Family::Poisson: return "poisson";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian") return Family::Gaussian;
  if (name == "logistic") return Family::Logistic;
  if (name == "poisson") return Family::Poisson;
  throw InputError("unknown family '" + std::string(name) + "'");
}

double log_partition(Family f, double u) {
  require_finite(u, "log_partition");
  switch (f) {
    case Family::Gaussian: return 0.5 * u * u;
    case Family::Logistic:
      // log(1 + e^u) without overflow for large positive u
      return u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
    case Family::Poisson: return std::exp(u);
  }
  return 0.0;
}

double mean(Family f, double u) {
  require_finite(u, "mean");
  switch (f) {
    case Family::Gaussian: return u;
    case Family::Logistic: return sigmoid(u);
    case Family::Poisson:
      require_poisson_cap(u, "mean");
      return std::exp(u);
  }
  return 0.0;
}

double variance(Family f, double u) {
  require_finite(u, "variance");
  switch (f) {
    case Family::Gaussian: return 1.0;
    case Family::Logistic: {
      // sigma(u) (1 - sigma(u)) = sigma(|u|) sigma(-|u|), stable in both tails
      const double e = std::exp(-std::abs(u));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case Family::Poisson:
      require_poisson_cap(u, "variance");
      return std::exp(u);
  }
  return 0.0;
}

double bregman(Family f, double u, double v) {
  require_finite(u, "bregman");
  require_finite(v, "bregman");
  if (f == Family::Gaussian) return 0.5 * (u - v) * (u - v);
  const double d = log_partition(f, u) - log_partition(f, v) - mean(f, v) * (u - v);
  // convexity makes this nonnegative; cancellation can leave a tiny negative residue
  return std::max(d, 0.0);
}

bool response_in_range(Family f, double y) {
  if (!std::isfinite(y)) return false;
  switch (f) {
    case Family::Gaussian: return true;
    case Family::Logistic: return y >= 0.0 && y <= 1.0;
    case Family::Poisson: return y >= 0.0;
  }
  return false;
}

IrlsTerms irls_step_terms(Family f, double eta, double y, double weight_floor) {
  require_finite(eta, "irls_step_terms");
  if (!response_in_range(f, y))
    throw DomainError("irls_step_terms: response " + std::to_string(y) + " outside the " +
                      std::string(family_name(f)) + " range");
  const double w = std::max(variance(f, eta), weight_floor);
  return {w, eta + (y - mean(f, eta)) / w};
}

}  // namespace krglm
