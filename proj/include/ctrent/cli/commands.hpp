#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctrent::cli {

// sysexits-style process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInput = 65;
inline constexpr int kExitUnsupported = 69;
inline constexpr int kExitInternal = 70;
inline constexpr int kExitIo = 74;

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctrent::cli
