#ifndef SEGPARSE_AUTOMATA_HPP
#define SEGPARSE_AUTOMATA_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "segparse/bitset.hpp"
#include "segparse/re.hpp"
#include "segparse/segments.hpp"

namespace segparse {

inline constexpr std::uint32_t dead_state = std::numeric_limits<std::uint32_t>::max();

// Parser automaton whose states are segments. Transitions are stored per (state, cell)
// as an index into a pool of successor sets.
struct ParserNfa {
	std::size_t states = 0;
	std::size_t cells = 0;
	bool reversed = false;
	StateSet initial;
	StateSet final;
	std::vector<std::uint32_t> index;  // state * cells + cell -> sets index, dead_state if none
	std::vector<StateSet> sets;

	const StateSet* next(std::size_t q, std::size_t cell) const
	{
		std::uint32_t k = index[q * cells + cell];
		return k == dead_state ? nullptr : &sets[k];
	}
	// Union of successors of every state in from under cell.
	StateSet step(const StateSet& from, std::size_t cell) const;
	// Same relation and initial/final sets, regardless of set pooling.
	bool same_relation(const ParserNfa& o) const;
	std::size_t arc_count() const;
	std::string dump(const SegmentTable& t, const NumberedRe& re) const;
};

ParserNfa build_nfa(const SegmentTable& table);
ParserNfa reverse(const ParserNfa& nfa);

struct DfaOptions {
	std::size_t max_states = std::size_t(1) << 16;
};

// Deterministic automaton over segment sets. Also used for the multi-entry variant, in which
// case states [0, entries) are the singletons in segment order. The dead state is implicit
// (dead_state) and never counted.
struct Dfa {
	std::size_t segments = 0;
	std::size_t cells = 0;
	bool reversed = false;
	std::vector<StateSet> sets;
	std::vector<std::uint32_t> delta;      // state * cells + cell
	std::vector<std::uint8_t> accepting;   // set meets the final set of the automaton
	std::uint32_t initial = dead_state;    // state holding the initial set, if present
	std::size_t entries = 0;               // singleton entry states, 0 for a plain DFA
	std::size_t base_states = 0;           // states before another machine was merged in
	std::unordered_map<StateSet, std::uint32_t, BitSetHash> lookup;

	// Dense tables for the hot loops, filled by finalize().
	std::vector<std::uint32_t> by_byte;    // state * 256 + byte
	std::vector<word_t> set_words;         // state * words + k
	std::size_t words = 0;

	std::size_t size() const noexcept { return sets.size(); }
	std::uint32_t move(std::uint32_t s, std::size_t cell) const { return delta[s * cells + cell]; }
	std::uint32_t move_byte(std::uint32_t s, unsigned char b) const { return by_byte[s * 256 + b]; }
	const word_t* words_of(std::uint32_t s) const { return set_words.data() + s * words; }
	std::uint32_t find(const StateSet& s) const;
	std::uint32_t entry(std::size_t segment) const { return static_cast<std::uint32_t>(segment); }
	void finalize(const NumberedRe& re);
	std::string dump(const SegmentTable& t, const NumberedRe& re) const;
};

// Powerset construction from the initial set, states numbered in depth-first discovery order.
Dfa determinize(const ParserNfa& nfa, const DfaOptions& opt = {});
// Powerset construction from every singleton; the singletons take the first ids.
Dfa build_medfa(const ParserNfa& nfa, const DfaOptions& opt = {});
// Adds the states of dfa missing from medfa; the result's initial is the DFA's initial state.
Dfa merge_dfa_into_medfa(const Dfa& dfa, const Dfa& medfa);

// Everything derived from one expression, immutable once built and shared by the engines.
struct Grammar {
	NumberedRe re;
	SegmentTable table;
	ParserNfa nfa;
	ParserNfa nfa_rev;
	Dfa dfa;
	Dfa dfa_rev;
	Dfa medfa;       // forward ME-DFA with the DFA merged in
	Dfa medfa_rev;   // reverse ME-DFA with the reverse DFA merged in

	std::uint16_t cell_of(unsigned char b) const { return re.byte_cell[b]; }
};

struct GrammarOptions {
	SegmentOptions segments;
	DfaOptions dfa;
	bool multi_entry = true;  // build the ME-DFAs needed by the parallel engine
};

std::shared_ptr<const Grammar> compile(std::string_view source, const GrammarOptions& opt = {});
std::shared_ptr<const Grammar> compile(const ReAst& ast, const GrammarOptions& opt = {});

} // namespace segparse

#endif
