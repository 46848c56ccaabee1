#include "doctest.h"

#include "segparse/automata.hpp"
#include "segparse/error.hpp"
#include "support/common.hpp"
#include "support/gen.hpp"
#include "support/lst_oracle.hpp"

using namespace segparse;

namespace {

std::uint16_t cell(const Grammar& g, char c) { return g.cell_of(static_cast<unsigned char>(c)); }

// Every state of d equals the NFA image of its predecessor, and the table is closed.
void check_powerset(const Dfa& d, const ParserNfa& nfa)
{
	for (std::uint32_t s = 0; s < d.size(); ++s)
		for (std::size_t c = 0; c < d.cells; ++c) {
			StateSet img = nfa.step(d.sets[s], c);
			std::uint32_t t = d.move(s, c);
			if (img.empty())
				CHECK(t == dead_state);
			else {
				REQUIRE(t != dead_state);
				CHECK(d.sets[t] == img);
			}
			CHECK(d.accepting[s] == d.sets[s].intersects(nfa.final));
		}
}

} // namespace

TEST_SUITE("automata")
{
	TEST_CASE("deterministic parser of the two-way union star")
	{
		auto g = fixture::grammar(fixture::e2);
		const Dfa& d = g->dfa;
		REQUIRE(d.size() == 3);
		CHECK(d.sets[d.initial] == fixture::ids(10, {1, 2, 3}));
		std::uint32_t t1 = d.initial;
		std::uint32_t t2 = d.move(t1, cell(*g, 'a'));
		REQUIRE(t2 != dead_state);
		CHECK(d.sets[t2] == fixture::ids(10, {4, 7, 8, 10}));
		std::uint32_t t3 = d.move(t2, cell(*g, 'b'));
		REQUIRE(t3 != dead_state);
		CHECK(d.sets[t3] == fixture::ids(10, {5, 6, 9}));
		CHECK(d.move(t1, cell(*g, 'b')) == dead_state);
		CHECK(d.move(t2, cell(*g, 'a')) == t2);
		CHECK(d.move(t3, cell(*g, 'a')) == t2);
		CHECK(d.move(t3, cell(*g, 'b')) == dead_state);
		for (std::uint32_t s : {t1, t2, t3})
			CHECK(d.accepting[s]);
	}

	TEST_CASE("multi-entry parser of the two-way union star")
	{
		auto g = fixture::grammar(fixture::e2);
		const Dfa& m = g->medfa;
		CHECK(m.entries == 10);
		CHECK(m.base_states == 13);
		for (std::size_t q = 0; q < 10; ++q)
			CHECK(m.sets[m.entry(q)] == fixture::ids(10, {q + 1}));
		CHECK(m.sets[10] == fixture::ids(10, {7, 8, 10}));
		CHECK(m.sets[11] == fixture::ids(10, {4, 7, 8, 10}));
		CHECK(m.sets[12] == fixture::ids(10, {5, 6, 9}));
		const auto a = cell(*g, 'a'), b = cell(*g, 'b');
		CHECK(m.move(1, a) == 3);     // S2 -a-> S4
		CHECK(m.move(2, a) == 10);    // S3 -a-> S11
		CHECK(m.move(3, b) == 12);    // S4 -b-> S13
		CHECK(m.move(4, a) == 3);
		CHECK(m.move(5, a) == 10);
		CHECK(m.move(6, a) == 3);
		CHECK(m.move(7, a) == 10);
		CHECK(m.move(10, a) == 11);
		CHECK(m.move(11, a) == 11);
		CHECK(m.move(11, b) == 12);
		CHECK(m.move(12, a) == 11);
		for (std::uint32_t s : {0u, 8u, 9u})
			for (auto c : {a, b})
				CHECK(m.move(s, c) == dead_state);
		// the merged machine also holds the DFA's start
		CHECK(m.sets[m.initial] == fixture::ids(10, {1, 2, 3}));
	}

	TEST_CASE("powerset soundness and entry property on random expressions")
	{
		gen::ReGen rg(23, gen::ReShape{"ab", 8, true, true});
		int built = 0;
		for (int i = 0; i < 200; ++i) {
			std::string src = rg.next();
			CAPTURE(src);
			std::shared_ptr<const Grammar> g;
			try {
				g = compile(src);
			} catch (const explosion_error&) {
				continue;
			}
			++built;
			check_powerset(g->dfa, g->nfa);
			check_powerset(g->dfa_rev, g->nfa_rev);
			check_powerset(g->medfa, g->nfa);
			check_powerset(g->medfa_rev, g->nfa_rev);
			CHECK(g->medfa.entries == g->table.size());
			for (std::size_t q = 0; q < g->table.size(); ++q) {
				StateSet one(g->table.size());
				one.set(q);
				CHECK(g->medfa.sets[q] == one);
				CHECK(g->medfa_rev.sets[q] == one);
			}
			CHECK(g->dfa.sets[g->dfa.initial] == g->nfa.initial);
			CHECK(g->dfa_rev.sets[g->dfa_rev.initial] == g->nfa_rev.initial);
			CHECK(g->medfa.find(g->nfa.initial) == g->medfa.initial);
		}
		CHECK(built >= 150);
	}

	TEST_CASE("reverse automaton swaps ends and arcs")
	{
		auto g = fixture::grammar(fixture::e3);
		const ParserNfa& f = g->nfa;
		const ParserNfa& r = g->nfa_rev;
		CHECK(r.initial == f.final);
		CHECK(r.final == f.initial);
		CHECK(reverse(r).same_relation(f));
		for (std::size_t p = 0; p < f.states; ++p)
			for (std::size_t c = 0; c < f.cells; ++c)
				if (const StateSet* s = f.next(p, c))
					s->for_each([&](std::size_t q) {
						const StateSet* back = r.next(q, c);
						REQUIRE(back);
						CHECK(back->test(p));
					});
	}

	TEST_CASE("language equivalence with a direct matcher on the syntax tree")
	{
		gen::ReGen rg(5, gen::ReShape{"ab", 6, true, false});
		for (int i = 0; i < 100; ++i) {
			std::string src = rg.next();
			CAPTURE(src);
			auto g = compile(src);
			for (const std::string& s : oracle::all_strings("ab", 6)) {
				CAPTURE(s);
				bool want = oracle::matches(g->re.ast, s);
				std::uint32_t st = g->dfa.initial;
				for (char c : s)
					st = st == dead_state ? st : g->dfa.move_byte(st, static_cast<unsigned char>(c));
				CHECK((st != dead_state && g->dfa.accepting[st]) == want);
			}
		}
	}

	TEST_CASE("family: deterministic states double per step and entries match segments")
	{
		for (std::size_t k = 1; k <= 9; ++k) {
			CAPTURE(k);
			auto g = fixture::grammar(fixture::family(k));
			CHECK(g->dfa.size() == (std::size_t(1) << (k + 1)) + 1);
			CHECK(g->medfa.entries == g->table.size());
			CHECK(g->nfa.states == g->table.size());
		}
	}

	TEST_CASE("state cap")
	{
		GrammarOptions opt;
		opt.dfa.max_states = 16;
		CHECK_THROWS_AS(compile(fixture::family(6), opt), explosion_error);
	}
}
