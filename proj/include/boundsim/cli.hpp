// cli.hpp: the boundsim command line.
//
// Exit status: 0 on success, 2 for invalid input or usage, 3 for numerical
// failures.

#pragma once

#include <ostream>

namespace boundsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace boundsim::cli
