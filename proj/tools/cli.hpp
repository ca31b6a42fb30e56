#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modelim::cli {

enum ExitStatus : int { ok = 0, failed = 1, usage = 2 };

// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modelim::cli
