#pragma once

#include <ostream>

namespace tered::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `tered` command line tool. Subcommands: simulate,
/// te-matrix, select, closed-form, discrete-demo. Returns 0 on success, 1 on
/// usage errors and 2 on data errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tered::cli
