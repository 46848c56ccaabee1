// Random expressions and random member texts for property and scale tests.
#ifndef SEGPARSE_TESTS_GEN_HPP
#define SEGPARSE_TESTS_GEN_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "segparse/automata.hpp"
#include "segparse/error.hpp"
#include "segparse/re.hpp"

namespace gen {

struct ReShape {
	std::string letters = "ab";
	std::size_t max_terminals = 8;
	bool classes = true;
	bool wildcard = true;
};

// Small random expression over shape.letters with at most max_terminals leaves.
class ReGen {
public:
	ReGen(std::uint64_t seed, ReShape shape = {}) : rng_(seed), shape_(std::move(shape)) {}

	std::string next()
	{
		left_ = 1 + pick(shape_.max_terminals);
		return expr(0);
	}

private:
	std::mt19937_64 rng_;
	ReShape shape_;
	std::size_t left_ = 0;

	std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

	std::string leaf()
	{
		if (left_ > 0)
			--left_;
		std::size_t r = pick(20);
		if (r == 0 && shape_.wildcard)
			return ".";
		if (r <= 2 && shape_.classes) {
			char a = shape_.letters[pick(shape_.letters.size())];
			char b = shape_.letters[pick(shape_.letters.size())];
			if (a > b)
				std::swap(a, b);
			return a == b ? std::string("[") + a + "]" : std::string("[") + a + "-" + b + "]";
		}
		return std::string(1, shape_.letters[pick(shape_.letters.size())]);
	}

	std::string postfix(std::string atom)
	{
		switch (pick(12)) {
		case 0: return atom + "*";
		case 1: return atom + "+";
		case 2: return atom + "?";
		case 3: return atom + "{" + std::to_string(1 + pick(2)) + "}";
		case 4: {
			std::size_t h = pick(2);
			return atom + "{" + std::to_string(h) + "," + std::to_string(h + 1 + pick(2)) + "}";
		}
		case 5: return atom + "{" + std::to_string(pick(2)) + ",}";
		default: return atom;
		}
	}

	std::string atom(int depth)
	{
		if (left_ <= 1 || depth > 3 || pick(3) == 0)
			return leaf();
		return "(" + expr(depth + 1) + ")";
	}

	std::string expr(int depth)
	{
		std::size_t r = pick(10);
		if (left_ >= 2 && r < 3) {
			std::string s = term(depth);
			while (left_ > 0 && pick(2) == 0)
				s += "|" + term(depth);
			if (pick(8) == 0)
				s += "|";
			return s;
		}
		return term(depth);
	}

	std::string term(int depth)
	{
		std::string s = postfix(atom(depth));
		while (left_ > 0 && pick(3) != 0)
			s += postfix(atom(depth));
		return s;
	}
};

// Random members of an expression's language.
class TextGen {
public:
	TextGen(const segparse::ReAst& ast, std::uint64_t seed) : ast_(ast), rng_(seed) {}

	std::string sample()
	{
		std::string out;
		emit(ast_.root, out);
		return out;
	}

	// Concatenated samples of the root's body until at least bytes long. The root must be a
	// star or a cross so that the result is still a member.
	std::string sample_at_least(std::size_t bytes)
	{
		const auto& r = ast_[ast_.root];
		if (r.kind != segparse::ReKind::star && r.kind != segparse::ReKind::cross)
			throw std::logic_error("root is not iterated");
		std::string out;
		out.reserve(bytes + 256);
		while (out.size() < bytes)
			emit(r.children[0], out);
		return out;
	}

private:
	const segparse::ReAst& ast_;
	std::mt19937_64 rng_;

	std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

	void chars(const segparse::CharSet& s, std::string& out)
	{
		std::vector<unsigned char> bytes;
		for (unsigned b = 0; b < 256; ++b)
			if (s.test(b) && b >= 0x20 && b < 0x7f)
				bytes.push_back(static_cast<unsigned char>(b));
		if (bytes.empty())
			for (unsigned b = 0; b < 256; ++b)
				if (s.test(b))
					bytes.push_back(static_cast<unsigned char>(b));
		out.push_back(static_cast<char>(bytes[pick(bytes.size())]));
	}

	void emit(std::size_t i, std::string& out)
	{
		using segparse::ReKind;
		const auto& n = ast_[i];
		switch (n.kind) {
		case ReKind::terminal:
		case ReKind::char_class:
		case ReKind::wildcard:
			chars(n.chars, out);
			return;
		case ReKind::epsilon:
			return;
		case ReKind::concat:
		case ReKind::group:
			for (std::size_t c : n.children)
				emit(c, out);
			return;
		case ReKind::alt:
			emit(n.children[pick(n.children.size())], out);
			return;
		case ReKind::star:
		case ReKind::cross: {
			std::size_t k = (n.kind == ReKind::cross ? 1 : 0) + pick(3);
			for (std::size_t j = 0; j < k; ++j)
				emit(n.children[0], out);
			return;
		}
		case ReKind::optional:
			if (pick(2))
				emit(n.children[0], out);
			return;
		case ReKind::repeat: {
			std::size_t k = n.min + (n.unbounded ? pick(3) : pick(n.max - n.min + 1));
			for (std::size_t j = 0; j < k; ++j)
				emit(n.children[0], out);
			return;
		}
		}
	}
};

// Expression of terminals letters long over "abc" wrapped in an outer star. Seeds are tried
// in order from seed until one compiles with the ME-DFAs within their caps.
struct Scaled {
	std::string source;
	std::shared_ptr<const segparse::Grammar> grammar;
	std::uint64_t seed;
};

inline Scaled scaled_expression(std::size_t terminals, std::uint64_t seed)
{
	for (std::uint64_t s = seed;; ++s) {
		ReGen g(s, ReShape{"abc", terminals, true, false});
		// Keep drawing until the leaf budget is spent so the size is exactly what was asked.
		std::string src;
		std::size_t count = 0;
		while (count < terminals) {
			std::string part = g.next();
			segparse::ReAst a = segparse::parse_re(part);
			std::size_t leaves = 0;
			for (const auto& n : a.nodes)
				leaves += n.kind == segparse::ReKind::terminal || n.kind == segparse::ReKind::char_class;
			if (leaves == 0 || count + leaves > terminals)
				continue;
			src += src.empty() ? "(" + part + ")" : "(" + part + ")";
			count += leaves;
		}
		src = "(" + src + ")*";
		try {
			segparse::GrammarOptions opt;
			opt.segments.max_segments = 1 << 14;
			opt.dfa.max_states = 1 << 15;
			return {src, segparse::compile(src, opt), s};
		} catch (const segparse::explosion_error&) {
		}
	}
}

} // namespace gen

#endif
