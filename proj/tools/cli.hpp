#pragma once

// Entry point of the bidlab command line, callable from tests.
// Returns the process exit code: 0 success, 2 input error, 3 numerical failure.

#include <iosfwd>

namespace bidlab {

int run_cli(int argc, const char* const* argv);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bidlab
