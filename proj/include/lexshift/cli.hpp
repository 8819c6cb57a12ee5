#pragma once

namespace lexshift {

// Entry point of the `lexshift` executable. Returns the process exit code:
// 0 success, 1 validation error, 2 runtime data error.
int run_cli(int argc, const char* const* argv);

}  // namespace lexshift
