#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace banditrec {

// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // bad flags, config or input files
inline constexpr int kExitRuntime = 2;  // missing artifacts and other failures

// Runs one subcommand. `args` excludes the program name. Human-readable
// progress goes to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace banditrec
