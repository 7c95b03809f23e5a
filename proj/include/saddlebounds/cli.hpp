#pragma once

namespace saddlebounds::cli {

/// Entry point of the saddlebounds tool (subcommands: analyze, bounds,
/// solve, suite, poly-roots).  Returns the process exit status: 0 when all
/// declared checks pass, 1 when a check fails, 2 on configuration or input
/// errors.
int run(int argc, const char* const* argv);

}  // namespace saddlebounds::cli
