#ifndef SEGPARSE_TOOLS_COMMANDS_HPP
#define SEGPARSE_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace segparse::tools {

enum exit_code : int { exit_accept = 0, exit_reject = 1, exit_io = 2, exit_usage = 3 };

// Runs the command line given as argv (program name first), writing to out and err.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace segparse::tools

#endif
