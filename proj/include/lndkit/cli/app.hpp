#pragma once

#include <iosfwd>

namespace lndkit::cli {

// The lndkit command line.  Reports go to `out`, progress and errors to `err`.
// Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lndkit::cli
