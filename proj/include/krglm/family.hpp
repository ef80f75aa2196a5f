#pragma once

#include <string_view>

namespace krglm {

// Canonical-link exponential family, identified by its log-partition a(u).
// Dispersion is fixed to 1 for every family.
enum class Family { Gaussian, Logistic, Poisson };

inline constexpr double kWeightFloor = 1e-10;
inline constexpr double kPoissonScoreCap = 50.0;

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

double log_partition(Family f, double u);  // a(u)
double mean(Family f, double u);           // a'(u)
double variance(Family f, double u);       // a''(u)

// D_a(u, v) = a(u) - a(v) - a'(v) (u - v)
double bregman(Family f, double u, double v);

struct IrlsTerms {
  double weight;
  double pseudo_response;
};

// Fisher-scoring weight and working response at score eta for observation y.
// The weight is clipped below at weight_floor.
IrlsTerms irls_step_terms(Family f, double eta, double y, double weight_floor = kWeightFloor);

// Whether y is an admissible response (or soft label) for the family.
bool response_in_range(Family f, double y);

}  // namespace krglm
