#ifndef SEGPARSE_SLPF_HPP
#define SEGPARSE_SLPF_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "segparse/bitset.hpp"
#include "segparse/re.hpp"
#include "segparse/segments.hpp"

namespace segparse {

// Shared linearized parse forest: n+1 columns of segment sets stored back to back,
// ceil(l/64) words per column.
class Slpf {
public:
	Slpf() = default;
	Slpf(const SegmentTable& table, std::size_t n);

	const SegmentTable& table() const { return *table_; }
	std::size_t length() const noexcept { return n_; }
	std::size_t words() const noexcept { return words_; }
	std::size_t segments() const noexcept { return table_ ? table_->size() : 0; }

	word_t* column(std::size_t r) noexcept { return cols_.data() + r * words_; }
	const word_t* column(std::size_t r) const noexcept { return cols_.data() + r * words_; }
	StateSet column_set(std::size_t r) const;
	void set_column(std::size_t r, const StateSet& s);
	bool contains(std::size_t r, std::size_t q) const
	{
		return (column(r)[q / word_bits] >> (q % word_bits)) & 1u;
	}

	// Storage in 64-bit words, including the fixed header fields.
	std::size_t memory_words() const noexcept;
	// "{2} {4} {9}", ids 1-based.
	std::string str() const;

	friend bool operator==(const Slpf& a, const Slpf& b)
	{
		return a.n_ == b.n_ && a.words_ == b.words_ && a.cols_ == b.cols_;
	}

private:
	const SegmentTable* table_ = nullptr;
	std::size_t n_ = 0;
	std::size_t words_ = 0;
	std::vector<word_t> cols_;
};

// Removes every segment that is not on a path from an initial segment in column 0 to a
// final segment in column n. Returns false when nothing is left.
bool clean(Slpf& f);
bool is_clean(const Slpf& f);

// One tree as its segment per column.
using Lst = std::vector<std::uint32_t>;

// Paths in lexicographic order of segment ids, at most limit of them.
std::vector<Lst> enumerate_lsts(const Slpf& f, std::size_t limit);
// Space-separated symbols without the end mark: "1( 2( 3( a4 b5 )3 )2 )1".
std::string render_lst(const SegmentTable& t, const Lst& lst);
// Number of paths, saturating at UINT64_MAX.
std::uint64_t count_lsts(const Slpf& f);

struct MatchSpan {
	std::size_t start = 0;
	std::size_t end = 0;   // half-open byte range [start, end)
	std::uint32_t group = 0;

	friend bool operator==(const MatchSpan&, const MatchSpan&) = default;
	friend auto operator<=>(const MatchSpan&, const MatchSpan&) = default;
};

// Spans enclosed by g( ... )g on at least one path, optionally only those nested inside
// group within. Sorted by (start, end) without duplicates. Throws query_error.
std::vector<MatchSpan> get_matches(const Slpf& f, const NumberedRe& re, std::uint32_t group,
                                   std::optional<std::uint32_t> within = std::nullopt);
// Spans of the operator children of one occurrence of span.group, over every path through it.
std::vector<MatchSpan> get_children(const Slpf& f, const NumberedRe& re, const MatchSpan& span);

// --- compact encoding ---

struct EncodedColumn {
	std::uint8_t tag = 0;      // 0: inline pair-index bitstring, 1: index into the wide table
	std::uint64_t value = 0;
};

// Deduplicating store for bitstrings longer than one word, open addressing.
class WideTable {
public:
	std::uint32_t insert(const std::vector<word_t>& bits);
	const std::vector<word_t>& at(std::uint32_t i) const { return entries_.at(i); }
	std::size_t size() const noexcept { return entries_.size(); }
	const std::vector<std::vector<word_t>>& entries() const noexcept { return entries_; }

private:
	std::vector<std::vector<word_t>> entries_;
	std::vector<std::uint32_t> slots_;
	void grow();
	std::size_t probe(const std::vector<word_t>& bits) const;
};

struct EncodedSlpf {
	std::uint32_t segments = 0;
	std::uint64_t length = 0;
	std::array<std::uint8_t, 32> digest{};
	std::vector<EncodedColumn> columns;
	WideTable wide;
};

// The (end-letter, follower) pairs available after a column, sorted.
std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_list(const SegmentTable& t, const StateSet& prev);

std::array<std::uint8_t, 32> table_digest(const SegmentTable& t);
EncodedSlpf encode(const Slpf& f);
Slpf decode(const EncodedSlpf& e, const SegmentTable& t);
void write_slpf(std::ostream& os, const EncodedSlpf& e);
EncodedSlpf read_slpf(std::istream& is);

// Column transition machine that regenerates one forest from its text. A (column, byte)
// pair may lead to different columns at different positions; those positions are kept
// as overrides.
struct SlpfDfa {
	std::vector<StateSet> states;
	std::unordered_map<std::uint64_t, std::uint32_t> delta; // state << 8 | byte
	std::uint32_t initial = 0;
	std::vector<std::pair<std::uint64_t, std::uint32_t>> overrides; // (column index, state)
};

SlpfDfa compress_to_dfa(const Slpf& f, std::string_view text);
Slpf replay(const SlpfDfa& d, const SegmentTable& t, std::string_view text);

} // namespace segparse

#endif
