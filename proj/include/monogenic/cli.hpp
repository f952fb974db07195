#pragma once

#include <iosfwd>

namespace monogenic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitVerifyFailed = 3;

// Entry point of the `monogenic` tool: subcommands detect, compare, sweep,
// verify and synth. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monogenic::cli
