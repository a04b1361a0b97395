#pragma once

namespace nakasec::cli {

/// Parses argv and executes one subcommand. Returns the process exit code:
/// 0 success, 2 domain/validation error, 3 depth target not reachable.
int run(int argc, const char* const* argv);

} // namespace nakasec::cli
