#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvdeg::cli {

/// Runs one command line (args exclude the program name). Returns the exit
/// code: 0 ok, 1 usage, 2 parse, 3 dimension, 4 numeric/degenerate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvdeg::cli
