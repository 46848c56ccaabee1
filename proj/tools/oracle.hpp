#ifndef SEGPARSE_TOOLS_ORACLE_HPP
#define SEGPARSE_TOOLS_ORACLE_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "segparse/automata.hpp"
#include "segparse/slpf.hpp"

namespace segparse::tools {

// Every accepting run of the parser NFA on text, found by depth-first search, as segment
// sequences in lexicographic order.
std::vector<Lst> nfa_runs(const Grammar& g, std::string_view text);

// Cross-checks the engines against nfa_runs on every string up to max_len over one
// representative byte per alphabet cell. Prints one line per check; returns the number
// of failed checks.
int run_oracle(const Grammar& g, std::size_t max_len, std::ostream& out);

} // namespace segparse::tools

#endif
