#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "segparse/automata.hpp"
#include "segparse/serial.hpp"
#include "segparse/slpf.hpp"
#include "support/common.hpp"

namespace fs = std::filesystem;
using segparse::tools::run_cli;

namespace {

struct Scratch {
	fs::path dir;

	Scratch()
	{
		dir = fs::temp_directory_path() / ("segparse-cli-" + std::to_string(::getpid()));
		fs::create_directories(dir);
	}
	~Scratch() { fs::remove_all(dir); }

	std::string file(const std::string& name, const std::string& body) const
	{
		fs::path p = dir / name;
		std::ofstream(p, std::ios::binary) << body;
		return p.string();
	}
};

struct Run {
	int code;
	std::string out, err;
};

Run cli(std::vector<std::string> args)
{
	args.insert(args.begin(), "segparse");
	std::ostringstream out, err;
	int code = run_cli(args, out, err);
	return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s)
{
	return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_SUITE("cli")
{
	TEST_CASE("parse emits counts, trees and spans")
	{
		Scratch s;
		std::string e2 = s.file("e2.re", std::string(fixture::e2) + "\n");
		std::string e3 = s.file("e3.re", fixture::e3);
		std::string abab = s.file("abab.txt", "abab");

		Run r = cli({"parse", e3, abab, "--emit", "count"});
		CHECK(r.code == 0);
		CHECK(r.out == "4\n");

		r = cli({"parse", e3, abab, "--emit", "lsts", "--limit", "2", "--threads", "2", "--chunks", "2"});
		CHECK(r.code == 0);
		CHECK(lines(r.out) == 2);

		r = cli({"parse", e3, abab, "--emit", "matches", "--query", "g5"});
		CHECK(r.out == "0\t2\tab\n2\t4\tab\n");

		r = cli({"parse", e2, s.file("empty.txt", ""), "--emit", "count", "--engine", "serial-nfa"});
		CHECK(r.out == "1\n");

		r = cli({"parse", e2, abab, "--engine", "serial-dfa"});
		CHECK(r.out == "accept\n");

		r = cli({"parse", e2, abab, "--emit", "csv", "--threads", "1"});
		CHECK(r.out.rfind("engine,threads,chunks,text_bytes,run,parse_ns,reach_ns,join_ns,build_ns\n", 0) == 0);
		CHECK(lines(r.out) == 2);
	}

	TEST_CASE("rejects report the offset")
	{
		Scratch s;
		Run r = cli({"parse", s.file("e2.re", fixture::e2), s.file("ba.txt", "ba")});
		CHECK(r.code == 1);
		CHECK(r.out == "reject at offset 1\n");
	}

	TEST_CASE("forest files decode to the serial forest")
	{
		Scratch s;
		std::string re = s.file("e2.re", fixture::e2);
		std::string out = (s.dir / "f.slpf").string();
		Run r = cli({"parse", re, s.file("t.txt", "abaaba"), "--emit", "slpf", "-o", out});
		REQUIRE(r.code == 0);
		std::ifstream in(out, std::ios::binary);
		auto g = fixture::grammar(fixture::e2);
		auto f = segparse::decode(segparse::read_slpf(in), g->table);
		CHECK(f == segparse::parse_serial_dfa(*g, "abaaba").slpf);
	}

	TEST_CASE("query subcommand")
	{
		Scratch s;
		std::string re = s.file("e3.re", fixture::e3), t = s.file("t.txt", "abab");
		Run r = cli({"query", re, t, "g5/g2"});
		CHECK(r.code == 0);
		CHECK(r.out == "0\t2\tab\n2\t4\tab\n");
		r = cli({"query", re, t, "g9"});
		CHECK(r.code == 3);
		CHECK(r.err.find("unknown group 9") != std::string::npos);
		r = cli({"query", re, t, "five"});
		CHECK(r.code == 3);
	}

	TEST_CASE("errors map to exit codes")
	{
		Scratch s;
		CHECK(cli({"parse", (s.dir / "missing.re").string(), "x"}).code == 2);
		CHECK(cli({"parse", s.file("bad.re", "(a"), s.file("t.txt", "a")}).code == 3);
		CHECK(cli({"parse", s.file("e2.re", fixture::e2), s.file("t.txt", "a"), "--engine", "gpu"}).code == 3);
		CHECK(cli({}).code == 3);
		CHECK(cli({"--version"}).code == 0);
	}

	TEST_CASE("bench sweeps thread counts")
	{
		Scratch s;
		Run r = cli({"bench", s.file("e2.re", fixture::e2), s.file("t.txt", "abaabaab"), "--threads-sweep", "1..3",
		             "--reps", "2"});
		CHECK(r.code == 0);
		CHECK(lines(r.out) == 7);
		CHECK(cli({"bench", s.file("e2.re", fixture::e2), s.file("t.txt", "ab"), "--threads-sweep", "3..1"}).code == 3);
	}

	TEST_CASE("oracle and dump subcommands")
	{
		Scratch s;
		std::string re = s.file("e3.re", fixture::e3);
		Run r = cli({"oracle", re, "--max-len", "4"});
		CHECK(r.code == 0);
		CHECK(r.out.find("accept \"abab\" runs=4") != std::string::npos);
		CHECK(r.out.find("FAIL") == std::string::npos);
		r = cli({"dump", s.file("e2.re", fixture::e2), "segments"});
		CHECK(lines(r.out) == 10);
		r = cli({"dump", s.file("e2.re", fixture::e2), "medfa"});
		CHECK(r.out.find("S13 = {5,6,9}") != std::string::npos);
		r = cli({"dump", s.file("e5.re", fixture::e5), "numbered", "--repeat-limit", "2"});
		CHECK(r.out == "1( 2( 3( a4 )3* | 5( a6 b7 )5 )2 )1+\n");
	}
}
