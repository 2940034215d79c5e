#pragma once

#include <ostream>

namespace discalign {

// Exit codes of the discalign tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitPartial = 3 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace discalign
