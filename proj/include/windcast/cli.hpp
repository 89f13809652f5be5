#ifndef WINDCAST_CLI_HPP
#define WINDCAST_CLI_HPP

#include <string>
#include <vector>

namespace windcast {

/**
 * Command-line entry point: inspect | train | evaluate | plot | synth.
 *
 * Every command is deterministic given its inputs; repeated invocations
 * write byte-identical files. Exit status is 0 iff the command completed
 * without fatal error — per-step soft failures (missing artifacts,
 * insufficient samples) become report rows, not failures.
 */
int run_cli(int argc, const char* const* argv);

/// Convenience overload for tests.
int run_cli(const std::vector<std::string>& args);

}  // namespace windcast

#endif  // WINDCAST_CLI_HPP
