#pragma once

#include <iosfwd>

namespace handover {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;  // ran, but the result violates a constraint
inline constexpr int kExitInput = 2;       // bad arguments, files or endpoint

/// Entry point of the `handover` tool, with injectable streams for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace handover
