#ifndef SEGPARSE_RE_HPP
#define SEGPARSE_RE_HPP

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace segparse {

using CharSet = std::bitset<256>;

enum class ReKind : std::uint8_t {
	terminal,
	epsilon,
	char_class,
	wildcard,
	concat,
	alt,
	star,
	cross,
	optional,
	repeat,
	group,
};

const char* kind_name(ReKind k) noexcept;

struct ReNode {
	ReKind kind = ReKind::epsilon;
	std::vector<std::size_t> children;
	CharSet chars;               // terminal, char_class and wildcard
	std::size_t min = 0;         // repeat lower bound
	std::size_t max = 0;         // repeat upper bound, ignored when unbounded
	bool unbounded = false;      // repeat written as {h,}
	std::size_t begin = 0;       // source span, byte offsets
	std::size_t end = 0;
};

// Syntax tree of a regular expression; nodes live in an arena, root indexes it.
struct ReAst {
	std::vector<ReNode> nodes;
	std::size_t root = 0;
	std::string source;

	const ReNode& operator[](std::size_t i) const { return nodes[i]; }
};

// Parses the textual syntax: literals, escapes, '.', bracket classes, '|', '*', '+', '?',
// '{h}', '{h,}', '{h,k}' and grouping. Empty alternatives and "()" denote the empty string.
// Throws syntax_error.
ReAst parse_re(std::string_view source);

// Prints an expression that parses back to a structurally equal tree.
std::string to_string(const ReAst& ast);

// Structural equality ignoring source spans.
bool same_structure(const ReAst& a, const ReAst& b);

// Disjoint character cells such that every terminal's set is a union of cells.
// Cells are ordered by their smallest byte.
std::vector<CharSet> partition_classes(const ReAst& ast);
std::vector<CharSet> partition_sets(const std::vector<CharSet>& sets);

// --- numbered expression ---

enum class NumKind : std::uint8_t {
	terminal,
	epsilon,
	concat,
	alt,
	star,
	cross,
	optional,
	repeat,
	group,
};

const char* kind_name(NumKind k) noexcept;

inline constexpr std::uint32_t no_node = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::uint16_t no_cell = std::numeric_limits<std::uint16_t>::max();

struct NumNode {
	NumKind kind = NumKind::epsilon;
	std::uint32_t number = 0;
	std::vector<std::uint32_t> children;
	std::uint32_t parent = no_node;
	CharSet chars;                      // terminals only
	std::vector<std::uint16_t> cells;   // terminals only, partition ids covering chars
	std::string label;                  // terminals only: "a", ".", "[a-c]"
	std::size_t origin = 0;             // AST node this came from
	std::uint32_t copy = 0;             // 1-based iteration index inside a bounded repetition, 0 otherwise
};

struct OpEntry {
	std::uint32_t number;
	NumKind kind;
	std::size_t arity;
};

// Expression where every terminal, epsilon and operator scope carries a distinct number.
struct NumberedRe {
	ReAst ast;
	std::vector<NumNode> nodes;          // index = number - 1
	std::vector<OpEntry> ops;            // operators only, by number
	std::vector<CharSet> cells;          // alphabet partition
	std::uint16_t byte_cell[256];        // byte -> cell id, no_cell when unused

	std::uint32_t root() const noexcept { return 0; }
	const NumNode& node(std::uint32_t number) const { return nodes[number - 1]; }
	std::size_t size() const noexcept { return nodes.size(); }
	bool is_operator(std::uint32_t number) const;
	// True when the scope of anc encloses the scope of number (or they are equal).
	bool encloses(std::uint32_t anc, std::uint32_t number) const;
	// Operator children of an operator, skipping terminals and epsilons.
	std::vector<std::uint32_t> operator_children(std::uint32_t number) const;
	// "1( 2( 3( a4 b5 )3 | a6 )2 )1*"
	std::string str() const;
};

NumberedRe number_re(const ReAst& ast);
NumberedRe number_re(std::string_view source);

// Rendering of a terminal label: printable characters verbatim, others as \xHH.
std::string char_label(unsigned char c);
std::string set_label(const CharSet& s);

} // namespace segparse

#endif
