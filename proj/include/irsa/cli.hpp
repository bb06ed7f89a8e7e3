#pragma once

namespace irsa {

// Command-line entry point (subcommands: analyze, simulate, sweep, optimize).
// Returns the process exit code: 0 success, 1 configuration error, 2 runtime
// error.
int run_cli(int argc, const char* const* argv);

}  // namespace irsa
