#pragma once

#include <iosfwd>

namespace ldacert {

// Entry point of the lda-cert tool.  Returns 0 on success, 2 on rejected
// parameters or input, 3 on accuracy failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ldacert
