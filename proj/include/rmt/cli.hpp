#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmt {

/// Runs one command (`args` excludes the program name). Diagnostics go to `err`
/// as a single line. Returns 0 on success, 1 on input errors (unknown flags,
/// malformed files, out-of-range parameters), 2 on numerical failures.
/// Subcommands: spectrum, clean, backtest, svd, simulate, dynamics, spikes.
/// `--config FILE` supplies `key = value` defaults for flags not given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmt
