#pragma once

namespace spax {

// Exit codes: 0 success, 1 input error, 2 model infeasibility, 3 numerical failure.
int run_cli(int argc, char** argv);

}  // namespace spax
