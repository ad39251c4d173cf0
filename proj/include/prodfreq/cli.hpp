#pragma once

namespace prodfreq::cli {

// Entry point shared by the binary and the tests. Exit status contract:
// 0 success, 1 domain error (machine-readable JSON object on stderr),
// 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace prodfreq::cli
