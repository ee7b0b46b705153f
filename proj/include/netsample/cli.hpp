#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netsample::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvariant = 2;

/// Entry point of the `netsample` tool. Subcommands: generate, solve, bounds,
/// degree-profile, tightness, validate, alpha-sweep. Results go to `--out`
/// when given, otherwise to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same as above with the arguments that follow the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netsample::cli
