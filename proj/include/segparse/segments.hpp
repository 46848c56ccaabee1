#ifndef SEGPARSE_SEGMENTS_HPP
#define SEGPARSE_SEGMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "segparse/bitset.hpp"
#include "segparse/re.hpp"

namespace segparse {

enum class SymKind : std::uint8_t { open, close, terminal, epsilon, end };

struct Symbol {
	SymKind kind;
	std::uint32_t number; // 0 for the end mark
};

// Numbered symbols of an expression in the order they appear in its linear rendering
// followed by the end mark. A symbol id is its index in that order.
struct Symbols {
	std::vector<Symbol> list;
	std::vector<std::string> text;     // "1(", ")3", "a4", "⊣"
	std::vector<std::uint32_t> open;   // by number, for operators
	std::vector<std::uint32_t> close;  // by number, for operators
	std::vector<std::uint32_t> leaf;   // by number, for terminals and epsilons
	std::uint32_t end = 0;

	std::size_t size() const noexcept { return list.size(); }
	bool is_end_letter(std::uint32_t id) const
	{
		SymKind k = list[id].kind;
		return k == SymKind::terminal || k == SymKind::end;
	}
};

Symbols make_symbols(const NumberedRe& re);

// Classic follower relation of the end-marked expression, indexed by symbol id.
struct Followers {
	Symbols syms;
	std::vector<BitSet> fol;
};

Followers classic_followers(const NumberedRe& re);

struct SegmentOptions {
	std::size_t repeat_limit = 1;
	std::size_t max_segments = std::size_t(1) << 16;
};

struct SegmentTable {
	Symbols syms;
	std::vector<std::vector<std::uint32_t>> segs;   // symbol ids; the last one is the end-letter
	std::vector<std::vector<std::uint16_t>> cells;  // per segment, the cells its end-letter reads
	StateSet initial;
	StateSet final;
	std::vector<StateSet> folseg;
	std::vector<std::vector<std::uint32_t>> by_cell; // cell -> segments whose end-letter reads it
	std::size_t cell_count = 0;

	std::size_t size() const noexcept { return segs.size(); }
	std::uint32_t first(std::size_t q) const { return segs[q].front(); }
	std::uint32_t end_letter(std::size_t q) const { return segs[q].back(); }
	bool ends_with_mark(std::size_t q) const { return segs[q].back() == syms.end; }
	// "1( 2( 3( a4"; the end mark renders as "⊣".
	std::string render(std::size_t q) const;
	// Same without the end mark, for building tree renderings.
	std::string render_body(std::size_t q) const;
	// One segment per line, "id: symbols", ids 1-based.
	std::string dump() const;
	std::string dump_folseg() const;
};

// Enumerates every segment by right-to-left extension of meta-prefixes from each end-letter.
// Ids are dense, ordered by class (initial and final, initial, internal, final) and then
// lexicographically by symbol position. Throws explosion_error past the cap.
SegmentTable compute_segments(const NumberedRe& re, const SegmentOptions& opt = {});

// sigma in FolSeg(rho) iff the first symbol of sigma follows the end-letter of rho.
std::vector<StateSet> follower_segments(const SegmentTable& table, const Followers& fol);

} // namespace segparse

#endif
