#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homlab {

/// Runs the homlab command line. Exit codes: 0 computed, 1 negative
/// decision, 2 usage or guard error. Output goes to out/err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace homlab
