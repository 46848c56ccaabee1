#include "doctest.h"

#include "segparse/error.hpp"
#include "segparse/serial.hpp"
#include "support/common.hpp"
#include "support/gen.hpp"
#include "support/lst_oracle.hpp"

using namespace segparse;

TEST_SUITE("serial")
{
	TEST_CASE("clean columns of the worked examples")
	{
		auto g = fixture::grammar(fixture::e2);
		for (auto engine : {parse_serial_nfa, parse_serial_dfa}) {
			ParseResult r = engine(*g, "ab");
			REQUIRE(r.accepted);
			CHECK(r.slpf.str() == "{2} {4} {9}");
			r = engine(*g, "abaaba");
			REQUIRE(r.accepted);
			CHECK(r.slpf.str() == "{2} {4} {6} {7} {4} {6} {10}");
			CHECK(count_lsts(r.slpf) == 1);
			CHECK(fixture::rendered(r.slpf) ==
			      std::vector<std::string>{"1( 2( 3( a4 b5 )3 )2 2( a6 )2 2( 3( a4 b5 )3 )2 2( a6 )2 )1"});
		}
	}

	TEST_CASE("reject offsets")
	{
		auto g = fixture::grammar(fixture::e2);
		for (auto engine : {parse_serial_nfa, parse_serial_dfa}) {
			ParseResult r = engine(*g, "ba");
			CHECK_FALSE(r.accepted);
			CHECK(r.reject_at == 1);
			r = engine(*g, "abb");
			CHECK(r.reject_at == 3);
			r = engine(*g, "abc");
			CHECK(r.reject_at == 3);
		}
		auto h = fixture::grammar("ab");
		ParseResult r = parse_serial_dfa(*h, "a");
		CHECK_FALSE(r.accepted);
		CHECK(r.reject_at == 1);
		CHECK_FALSE(recognize_serial(*h, "a"));
		CHECK(recognize_serial(*h, "ab"));
	}

	TEST_CASE("engines match trees derived from the expression")
	{
		gen::ReGen rg(101, gen::ReShape{"ab", 6, true, true});
		int checked = 0;
		for (int i = 0; i < 120; ++i) {
			std::string src = rg.next();
			CAPTURE(src);
			std::shared_ptr<const Grammar> g;
			try {
				g = compile(src);
			} catch (const explosion_error&) {
				continue;
			}
			++checked;
			for (const std::string& s : oracle::all_strings("ab", 4)) {
				CAPTURE(s);
				auto want = oracle::factored_lsts(g->re, g->table, s, 1);
				CHECK(want.missing.empty());
				ParseResult n = parse_serial_nfa(*g, s);
				ParseResult d = parse_serial_dfa(*g, s);
				CHECK(n.accepted == !want.paths.empty());
				CHECK(d.accepted == n.accepted);
				CHECK(recognize_serial(*g, s) == n.accepted);
				if (!n.accepted) {
					CHECK(n.reject_at == d.reject_at);
					continue;
				}
				CHECK(n.slpf == d.slpf);
				CHECK(is_clean(d.slpf));
				CHECK(enumerate_lsts(d.slpf, 100000) == want.paths);
				CHECK(count_lsts(d.slpf) == want.paths.size());
			}
		}
		CHECK(checked >= 100);
	}

	TEST_CASE("texts outside the alphabet reject at the first foreign byte")
	{
		auto g = fixture::grammar("[a-c]*");
		ParseResult r = parse_serial_dfa(*g, std::string("abc\0ab", 6));
		CHECK(r.reject_at == 4);
		CHECK(parse_serial_nfa(*g, std::string("abc\0ab", 6)).reject_at == 4);
	}
}
