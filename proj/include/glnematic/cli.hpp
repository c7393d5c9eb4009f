#pragma once

#include <iosfwd>

namespace glnematic {

enum ExitCode : int { kExitOk = 0, kExitAuditFailure = 1, kExitBlowUp = 2, kExitUsage = 3 };

/// Subcommands run, sweep, analyze and compare.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glnematic
