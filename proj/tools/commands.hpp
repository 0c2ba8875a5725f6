#pragma once

#include <ostream>

namespace hpt::cli {

// Runs the hpt command line. Reports go to `out` (or --out), summaries and
// timing to `err`. Returns 0 pass, 1 check failure, 2 input error,
// 3 internal error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hpt::cli
