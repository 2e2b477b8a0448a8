#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isoglm {

// Parses and dispatches one CLI invocation. `args` excludes the program
// name. Returns the process exit status: 0 when a complete report was
// written, nonzero otherwise with a one-line diagnostic on `err`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace isoglm
