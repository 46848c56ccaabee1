#ifndef SEGPARSE_TESTS_COMMON_HPP
#define SEGPARSE_TESTS_COMMON_HPP

#include <initializer_list>
#include <map>
#include <memory>
#include <string>

#include "segparse/automata.hpp"
#include "segparse/slpf.hpp"

namespace fixture {

inline const char* const e1 = "(a|ab|aba)+";
inline const char* const e2 = "(ab|a)*";
inline const char* const e3 = "(a|b|ab)+";
inline const char* const e5 = "(a*|ab)+";

inline std::string family(std::size_t k)
{
	return "(a|b)*a(a|b){" + std::to_string(k) + "}";
}

// Compiled once per source and options.
inline std::shared_ptr<const segparse::Grammar> grammar(const std::string& src, std::size_t repeat_limit = 1)
{
	static std::map<std::pair<std::string, std::size_t>, std::shared_ptr<const segparse::Grammar>> cache;
	auto& g = cache[{src, repeat_limit}];
	if (!g) {
		segparse::GrammarOptions opt;
		opt.segments.repeat_limit = repeat_limit;
		g = segparse::compile(src, opt);
	}
	return g;
}

// Set from 1-based segment ids.
inline segparse::StateSet ids(std::size_t l, std::initializer_list<std::size_t> one_based)
{
	segparse::StateSet s(l);
	for (std::size_t q : one_based)
		s.set(q - 1);
	return s;
}

inline std::vector<std::string> rendered(const segparse::Slpf& f, std::size_t limit = 1000)
{
	std::vector<std::string> out;
	for (const auto& lst : segparse::enumerate_lsts(f, limit))
		out.push_back(segparse::render_lst(f.table(), lst));
	return out;
}

} // namespace fixture

#endif
