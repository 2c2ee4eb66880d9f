#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rw/verdict.hpp"

namespace rw::cli {

/// 0 HOLDS, 1 FAILS, 2 UNKNOWN-AT-BOUND; usage and input errors are 3.
int exit_code(Status s);

/// Runs `rw` with the given arguments (without the program name). The JSON
/// report goes to `--out` or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rw::cli
