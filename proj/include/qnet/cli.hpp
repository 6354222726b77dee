#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qnet::cli {

// Runs one command line (args excludes the program name). Exit codes:
// 0 success, 1 I/O failure, 2 invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnet::cli
