// Reference LSTs built straight from the numbered tree, without segments or automata.
#ifndef SEGPARSE_TESTS_LST_ORACLE_HPP
#define SEGPARSE_TESTS_LST_ORACLE_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segparse/re.hpp"
#include "segparse/segments.hpp"

namespace oracle {

using Tokens = std::vector<std::string>;

inline const std::string end_mark = "\xe2\x8a\xa3";

// Every token string "1( ... )1 ⊣" that the numbered expression derives for text, keeping
// only trees in which no token repeats more than limit times between two letters. The cut
// happens while deriving, which also keeps nullable iterations finite.
class Expander {
public:
	Expander(const segparse::NumberedRe& re, std::string_view text, std::size_t limit)
		: re_(re), text_(text), limit_(limit) {}

	std::vector<Tokens> run()
	{
		node(1, 0, [&](std::size_t p) {
			if (p == text_.size())
				emit(end_mark, p, [&](std::size_t) { out_.push_back(toks_); });
		});
		std::sort(out_.begin(), out_.end());
		out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
		return out_;
	}

private:
	using K = std::function<void(std::size_t)>;

	const segparse::NumberedRe& re_;
	std::string_view text_;
	std::size_t limit_;
	Tokens toks_;
	std::size_t factor_start_ = 0;
	std::vector<Tokens> out_;

	void emit(std::string t, std::size_t p, const K& k, bool letter = false)
	{
		if (std::count(toks_.begin() + static_cast<std::ptrdiff_t>(factor_start_), toks_.end(), t) >=
		    static_cast<std::ptrdiff_t>(limit_))
			return;
		toks_.push_back(std::move(t));
		std::size_t saved = factor_start_;
		if (letter)
			factor_start_ = toks_.size();
		k(p);
		factor_start_ = saved;
		toks_.pop_back();
	}

	void seq(const std::vector<std::uint32_t>& ch, std::size_t i, std::size_t p, const K& k)
	{
		if (i == ch.size())
			return k(p);
		node(ch[i], p, [&](std::size_t q) { seq(ch, i + 1, q, k); });
	}

	void iterate(std::uint32_t num, std::size_t p, std::size_t done, const K& k)
	{
		const auto& n = re_.node(num);
		if (n.kind == segparse::NumKind::star || done > 0)
			k(p);
		seq(n.children, 0, p, [&](std::size_t q) { iterate(num, q, done + 1, k); });
	}

	void node(std::uint32_t num, std::size_t p, const K& k)
	{
		const auto& n = re_.node(num);
		std::string id = std::to_string(num);
		using segparse::NumKind;
		switch (n.kind) {
		case NumKind::terminal:
			if (p < text_.size() && n.chars.test(static_cast<unsigned char>(text_[p])))
				emit(n.label + id, p + 1, k, true);
			return;
		case NumKind::epsilon:
			emit("\xce\xb5" + id, p, k);
			return;
		default:
			break;
		}
		K close = [&](std::size_t q) { emit(")" + id, q, k); };
		K body = [&](std::size_t q) {
			switch (n.kind) {
			case NumKind::alt:
				for (std::uint32_t c : n.children)
					node(c, q, close);
				break;
			case NumKind::optional:
				close(q);
				seq(n.children, 0, q, close);
				break;
			case NumKind::star:
			case NumKind::cross:
				iterate(num, q, 0, close);
				break;
			default:
				seq(n.children, 0, q, close);
				break;
			}
		};
		emit(id + "(", p, body);
	}
};

// Cuts a token string after every terminal and after the end mark.
inline std::vector<Tokens> factor(const Tokens& lst, const segparse::NumberedRe& re)
{
	std::vector<Tokens> out(1);
	for (const std::string& t : lst) {
		out.back().push_back(t);
		bool letter = t == end_mark;
		if (!letter && !t.empty() && t.back() != '(' && t.front() != ')' && t.rfind("\xce\xb5", 0) != 0)
			letter = true;
		if (letter)
			out.emplace_back();
	}
	out.pop_back();
	(void)re;
	return out;
}

inline std::string join(const Tokens& t, std::size_t from = 0, std::size_t to = std::string::npos)
{
	std::string s;
	for (std::size_t i = from; i < std::min(to, t.size()); ++i) {
		if (!s.empty())
			s += ' ';
		s += t[i];
	}
	return s;
}

// True when no token occurs more than limit times in the factor.
inline bool within_limit(const Tokens& f, std::size_t limit)
{
	std::map<std::string, std::size_t> c;
	for (const std::string& t : f)
		if (++c[t] > limit)
			return false;
	return true;
}

struct Factored {
	std::vector<std::vector<std::uint32_t>> paths;   // segment ids, sorted
	std::vector<std::string> missing;                // factors within the limit but absent from the table
};

// LSTs of text that respect the repetition limit, as segment sequences of table.
inline Factored factored_lsts(const segparse::NumberedRe& re, const segparse::SegmentTable& table,
                              std::string_view text, std::size_t limit)
{
	std::map<std::string, std::uint32_t> ids;
	for (std::size_t q = 0; q < table.size(); ++q)
		ids[table.render(q)] = static_cast<std::uint32_t>(q);
	Factored r;
	for (const Tokens& lst : Expander(re, text, limit).run()) {
		auto parts = factor(lst, re);
		if (!std::all_of(parts.begin(), parts.end(), [&](const Tokens& f) { return within_limit(f, limit); }))
			continue;
		std::vector<std::uint32_t> path;
		bool ok = true;
		for (const Tokens& f : parts) {
			auto it = ids.find(join(f));
			if (it == ids.end()) {
				r.missing.push_back(join(f));
				ok = false;
				break;
			}
			path.push_back(it->second);
		}
		if (ok)
			r.paths.push_back(std::move(path));
	}
	std::sort(r.paths.begin(), r.paths.end());
	r.paths.erase(std::unique(r.paths.begin(), r.paths.end()), r.paths.end());
	return r;
}

// Adjacent token pairs over all LSTs of the given texts, by token text.
inline std::set<std::pair<std::string, std::string>> adjacent_pairs(const segparse::NumberedRe& re,
                                                                    const std::vector<std::string>& texts)
{
	std::set<std::pair<std::string, std::string>> out;
	for (const std::string& t : texts)
		for (const Tokens& lst : Expander(re, t, 2).run())
			for (std::size_t i = 0; i + 1 < lst.size(); ++i)
				out.emplace(lst[i], lst[i + 1]);
	return out;
}

// End offsets reachable by matching AST node i from start; works on the unnumbered tree.
inline std::set<std::size_t> ends(const segparse::ReAst& ast, std::size_t i, std::string_view text, std::size_t start)
{
	using segparse::ReKind;
	const auto& n = ast[i];
	auto seq = [&](const std::set<std::size_t>& from, std::size_t child) {
		std::set<std::size_t> out;
		for (std::size_t p : from) {
			auto e = ends(ast, child, text, p);
			out.insert(e.begin(), e.end());
		}
		return out;
	};
	auto closure = [&](std::set<std::size_t> from, std::size_t child) {
		std::set<std::size_t> all = from;
		while (!from.empty()) {
			std::set<std::size_t> next;
			for (std::size_t p : seq(from, child))
				if (all.insert(p).second)
					next.insert(p);
			from = std::move(next);
		}
		return all;
	};
	switch (n.kind) {
	case ReKind::terminal:
	case ReKind::char_class:
	case ReKind::wildcard:
		if (start < text.size() && n.chars.test(static_cast<unsigned char>(text[start])))
			return {start + 1};
		return {};
	case ReKind::epsilon:
		return {start};
	case ReKind::group:
	case ReKind::concat: {
		std::set<std::size_t> cur{start};
		for (std::size_t c : n.children)
			cur = seq(cur, c);
		return cur;
	}
	case ReKind::alt: {
		std::set<std::size_t> out;
		for (std::size_t c : n.children) {
			auto e = ends(ast, c, text, start);
			out.insert(e.begin(), e.end());
		}
		return out;
	}
	case ReKind::star:
		return closure({start}, n.children[0]);
	case ReKind::cross:
		return closure(ends(ast, n.children[0], text, start), n.children[0]);
	case ReKind::optional: {
		auto e = ends(ast, n.children[0], text, start);
		e.insert(start);
		return e;
	}
	case ReKind::repeat: {
		std::set<std::size_t> cur{start};
		for (std::size_t k = 0; k < n.min; ++k)
			cur = seq(cur, n.children[0]);
		if (n.unbounded)
			return closure(cur, n.children[0]);
		std::set<std::size_t> all = cur;
		for (std::size_t k = n.min; k < n.max; ++k) {
			cur = seq(cur, n.children[0]);
			all.insert(cur.begin(), cur.end());
		}
		return all;
	}
	}
	return {};
}

inline bool matches(const segparse::ReAst& ast, std::string_view text)
{
	return ends(ast, ast.root, text, 0).count(text.size()) > 0;
}

// All strings over letters up to length max_len, shortest first.
inline std::vector<std::string> all_strings(const std::string& letters, std::size_t max_len)
{
	std::vector<std::string> out{""};
	std::size_t from = 0;
	for (std::size_t len = 1; len <= max_len; ++len) {
		std::size_t to = out.size();
		for (std::size_t i = from; i < to; ++i)
			for (char c : letters)
				out.push_back(out[i] + c);
		from = to;
	}
	return out;
}

} // namespace oracle

#endif
