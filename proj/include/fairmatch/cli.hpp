#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairmatch {

/// Runs the command line tool on `args` (without the program name). Returns
/// the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairmatch
