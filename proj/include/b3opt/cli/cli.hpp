#pragma once

namespace b3opt::cli {

// Exit codes: 0 success, 2 usage error, 3 input-data error, 4 numerical
// failure, 5 I/O error.
int run_cli(int argc, const char* const* argv);

}  // namespace b3opt::cli
