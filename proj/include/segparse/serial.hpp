#ifndef SEGPARSE_SERIAL_HPP
#define SEGPARSE_SERIAL_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "segparse/automata.hpp"
#include "segparse/slpf.hpp"

namespace segparse {

// Wall-clock nanoseconds per phase. Serial engines only fill total_ns and build_ns.
struct PhaseTimes {
	std::uint64_t reach_ns = 0;
	std::uint64_t join_ns = 0;
	std::uint64_t build_ns = 0;
	std::uint64_t total_ns = 0;
};

struct ParseResult {
	bool accepted = false;
	// Index of the first empty forward column, or n when the last column has no final
	// segment. Meaningful only when rejected.
	std::size_t reject_at = 0;
	// Clean forest when accepted; the forward columns otherwise.
	Slpf slpf;
	PhaseTimes times;
};

// Forward pass ORs successor sets of the parser NFA, backward pass uses the reverse NFA
// and intersects in place.
ParseResult parse_serial_nfa(const Grammar& g, std::string_view text);
// Same output using the DFA and the reverse DFA.
ParseResult parse_serial_dfa(const Grammar& g, std::string_view text);
bool recognize_serial(const Grammar& g, std::string_view text);

} // namespace segparse

#endif
