#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adastable {

/// Runs one command line (args[0] is the program name). Results go to files under
/// --out; `out` receives help text and a short report, `err` a single-line JSON
/// error object on failure. Returns the process exit status.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adastable
