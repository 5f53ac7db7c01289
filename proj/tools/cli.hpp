#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbtwin::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  ///< a library error: bad data, failed training, I/O
inline constexpr int exit_usage = 2;    ///< bad flags or config

/**
 * Entry point of the gbtwin tool. `args` excludes the program name.
 *
 * Subcommands: gen-balls, train, predict, cv, grid, bench, stats, sensitivity.
 * Results go to `out` (or to --out files); diagnostics go to `err`.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbtwin::cli
