#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rothman::cli {

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// status: 0 success, 1 parse or validation error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace rothman::cli
