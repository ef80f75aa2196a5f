#pragma once

#include <string>

#include "krglm/solver.hpp"

namespace krglm::cli {

inline constexpr int kModelFormatVersion = 1;

// Plain-text container:
//   krglm-model <version>
//   family <name> / kernel <name> / degree <m> / lambda <v>
//   converged <0|1> / iterations <k> / objective <v>
//   rows <n> / cols <d>
//   n lines "alpha x_1 ... x_d"
std::string serialize_model(const FittedModel& m);
FittedModel parse_model(const std::string& text);

void save_model(const std::string& path, const FittedModel& m);
FittedModel load_model(const std::string& path);

}  // namespace krglm::cli
