#pragma once

#include <ostream>

namespace svmpool::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

// Entry point shared by the executable and in-process tests.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace svmpool::cli
