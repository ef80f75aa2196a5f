#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krglm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

// args excludes the program name: {"fit", "--data", "x.csv", ...}
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace krglm::cli
