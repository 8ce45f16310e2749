#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsavg {

/// Entry point of the `gsavg` command line tool. args[0] is the program
/// name. Results go to files or `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsavg
