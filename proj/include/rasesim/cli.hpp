#pragma once

#include <iosfwd>

namespace rasesim {

/// Entry point of the rase_sim tool. Returns 0 on success, 1 on a config or
/// usage error and 2 on a runtime failure. Failures print one line
/// `error: <stage>: <message>` to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace rasesim
