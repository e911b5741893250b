#pragma once

#include <iosfwd>

namespace cochranq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitConfigError = 3;

/// Runs the `cochranq` command line. The exit status reports operational
/// success only; a rejected hypothesis still exits 0.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cochranq::cli
