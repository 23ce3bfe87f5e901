#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace soldiv::cli {

// Runs the command line given in args (program name excluded). Returns the
// process exit code: 0 success, 1 verification mismatch or internal failure,
// 2 usage or parameter error, 3 resource guard refusal.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace soldiv::cli
