#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <regex>
#include <sstream>

#include "oracle.hpp"
#include "segparse/error.hpp"
#include "segparse/parallel.hpp"
#include "segparse/serial.hpp"
#include "segparse/slpf.hpp"

namespace segparse::tools {

namespace {

struct io_error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
	if (path == "-") {
		std::ostringstream ss;
		ss << std::cin.rdbuf();
		return ss.str();
	}
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw io_error("cannot open " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	if (in.bad())
		throw io_error("cannot read " + path);
	return ss.str();
}

std::string read_re(const std::string& path)
{
	std::string s = read_file(path);
	if (!s.empty() && s.back() == '\n') {
		s.pop_back();
		if (!s.empty() && s.back() == '\r')
			s.pop_back();
	}
	return s;
}

struct EngineFlags {
	std::string engine = "parallel";
	std::size_t chunks = 0;
	std::size_t threads = 0;
	std::size_t fragments = 4;
	std::size_t repeat_limit = 1;
};

void add_grammar_flags(CLI::App* app, EngineFlags& f)
{
	app->add_option("--repeat-limit", f.repeat_limit, "Times a numbered symbol may repeat inside a segment")
		->check(CLI::PositiveNumber);
}

void add_engine_flags(CLI::App* app, EngineFlags& f)
{
	app->add_option("--engine", f.engine, "Parser engine")
		->check(CLI::IsMember({"serial-nfa", "serial-dfa", "parallel"}));
	app->add_option("--chunks", f.chunks, "Chunk count (default: one per thread)")->check(CLI::PositiveNumber);
	app->add_option("--threads", f.threads, "Worker threads (default: hardware threads)")->check(CLI::PositiveNumber);
	app->add_option("--fragments", f.fragments, "Fragments per chunk")->check(CLI::PositiveNumber);
	add_grammar_flags(app, f);
}

std::shared_ptr<const Grammar> load_grammar(const std::string& path, const EngineFlags& f, bool multi_entry)
{
	GrammarOptions go;
	go.segments.repeat_limit = f.repeat_limit;
	go.multi_entry = multi_entry;
	return compile(read_re(path), go);
}

ParseResult run_engine(const Grammar& g, std::string_view text, const EngineFlags& f, WorkerPool* pool = nullptr)
{
	if (f.engine == "serial-nfa")
		return parse_serial_nfa(g, text);
	if (f.engine == "serial-dfa")
		return parse_serial_dfa(g, text);
	return parse_parallel(g, text, {f.chunks, f.threads, f.fragments}, pool);
}

std::string dump_text(const Grammar& g, const std::string& what)
{
	if (what == "numbered")
		return g.re.str() + '\n';
	if (what == "segments")
		return g.table.dump();
	if (what == "folseg")
		return g.table.dump_folseg();
	if (what == "nfa")
		return g.nfa.dump(g.table, g.re);
	if (what == "dfa")
		return g.dfa.dump(g.table, g.re);
	return g.medfa.dump(g.table, g.re);
}

const std::vector<std::string> dump_kinds{"numbered", "segments", "folseg", "nfa", "dfa", "medfa"};

struct Query {
	std::uint32_t group;
	std::optional<std::uint32_t> within;
};

Query parse_query(const std::string& q)
{
	static const std::regex rx("g([0-9]+)(?:/g([0-9]+))?");
	std::smatch m;
	if (!std::regex_match(q, m, rx))
		throw CLI::ValidationError("query", "expected g<N> or g<N>/g<M>, got '" + q + "'");
	auto num = [&](const std::string& s) -> std::uint32_t {
		unsigned long v = std::stoul(s);
		if (v > std::numeric_limits<std::uint32_t>::max())
			throw query_error("unknown group " + s);
		return static_cast<std::uint32_t>(v);
	};
	Query out{num(m[1].str()), std::nullopt};
	if (m[2].matched)
		out.within = num(m[2].str());
	return out;
}

void print_matches(const std::vector<MatchSpan>& spans, std::string_view text, std::ostream& out)
{
	for (const MatchSpan& s : spans) {
		out << s.start << '\t' << s.end << '\t';
		out.write(text.data() + s.start, static_cast<std::streamsize>(s.end - s.start));
		out << '\n';
	}
}

const char* csv_header = "engine,threads,chunks,text_bytes,run,parse_ns,reach_ns,join_ns,build_ns\n";

void csv_row(std::ostream& out, const EngineFlags& f, std::size_t threads, std::size_t chunks, std::size_t bytes,
             std::size_t run, const PhaseTimes& t)
{
	out << f.engine << ',' << threads << ',' << chunks << ',' << bytes << ',' << run << ',' << t.total_ns << ','
	    << t.reach_ns << ',' << t.join_ns << ',' << t.build_ns << '\n';
}

std::size_t hardware_threads()
{
	return std::max(1u, std::thread::hardware_concurrency());
}

// Threads and chunks as the engine will actually use them.
std::pair<std::size_t, std::size_t> effective(const EngineFlags& f, std::size_t threads, std::size_t n)
{
	if (f.engine != "parallel")
		return {1, 1};
	std::size_t chunks = f.chunks ? f.chunks : threads;
	return {threads, plan_chunks(n, chunks, f.fragments).count()};
}

} // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Parser for regular expressions that returns every syntax tree of a text"};
	app.require_subcommand(1);
	app.set_version_flag("--version", "segparse 1.0");

	EngineFlags flags;
	std::string re_file, text_file, query_text, emit = "none", output, dump, sweep;
	std::size_t limit = 10, reps = 3, max_len = 4;

	auto* parse = app.add_subcommand("parse", "Parse a text and print or save the forest");
	parse->add_option("re", re_file, "File holding the expression")->required();
	parse->add_option("text", text_file, "Text file, - for stdin")->required();
	add_engine_flags(parse, flags);
	parse->add_option("--emit", emit, "What to print")
		->check(CLI::IsMember({"none", "slpf", "lsts", "count", "matches", "csv"}));
	parse->add_option("--limit", limit, "Trees printed by --emit lsts")->check(CLI::PositiveNumber);
	parse->add_option("--query", query_text, "Group for --emit matches, g<N> or g<N>/g<M>");
	parse->add_option("-o,--output", output, "File for --emit slpf (default: stdout)");
	parse->add_option("--dump", dump, "Print a table before parsing")->check(CLI::IsMember(dump_kinds));

	auto* query = app.add_subcommand("query", "List the spans matched by a group");
	query->add_option("re", re_file)->required();
	query->add_option("text", text_file)->required();
	query->add_option("query", query_text, "g<N> or g<N>/g<M>")->required();
	add_engine_flags(query, flags);

	auto* bench = app.add_subcommand("bench", "Time parses and print CSV rows");
	bench->add_option("re", re_file)->required();
	bench->add_option("text", text_file)->required();
	add_engine_flags(bench, flags);
	bench->add_option("--threads-sweep", sweep, "Thread range a..b, one configuration per count");
	bench->add_option("--reps", reps, "Runs per configuration")->check(CLI::PositiveNumber);

	auto* oracle = app.add_subcommand("oracle", "Check every engine against exhaustive run enumeration");
	oracle->add_option("re", re_file)->required();
	oracle->add_option("--max-len", max_len, "Longest string checked")->check(CLI::Range(0, 6));
	add_grammar_flags(oracle, flags);

	auto* dumpc = app.add_subcommand("dump", "Print the numbered expression, segments or an automaton");
	dumpc->add_option("re", re_file)->required();
	dumpc->add_option("what", dump, "Table to print")->required()->check(CLI::IsMember(dump_kinds));
	add_grammar_flags(dumpc, flags);

	std::vector<const char*> args;
	for (const std::string& a : argv)
		args.push_back(a.c_str());
	try {
		app.parse(static_cast<int>(args.size()), args.data());
	} catch (const CLI::ParseError& e) {
		int code = app.exit(e, out, err);
		return code == 0 ? 0 : exit_usage;
	}

	try {
		if (*dumpc) {
			auto g = load_grammar(re_file, flags, dump == "medfa");
			out << dump_text(*g, dump);
			return exit_accept;
		}
		if (*oracle) {
			auto g = load_grammar(re_file, flags, true);
			double strings = 1, total = 1;
			for (std::size_t i = 0; i < max_len; ++i)
				total += strings *= static_cast<double>(g->re.cells.size());
			if (total > 2e6) {
				err << "error: too many strings to enumerate (" << total << ")\n";
				return exit_usage;
			}
			return run_oracle(*g, max_len, out) == 0 ? exit_accept : exit_reject;
		}

		std::optional<Query> q;
		if (*query || !query_text.empty())
			q = parse_query(query_text);
		auto g = load_grammar(re_file, flags, flags.engine == "parallel" || dump == "medfa");
		if (q) {
			// Checked before parsing so an unknown group is a usage error even on bad text.
			for (std::optional<std::uint32_t> n : {std::optional{q->group}, q->within})
				if (n && !g->re.is_operator(*n))
					throw query_error("unknown group " + std::to_string(*n));
		}
		std::string text = read_file(text_file);

		if (*bench) {
			std::size_t lo = flags.threads ? flags.threads : hardware_threads(), hi = lo;
			if (!sweep.empty()) {
				static const std::regex rx("([0-9]+)\\.\\.([0-9]+)");
				std::smatch m;
				if (!std::regex_match(sweep, m, rx) || std::stoul(m[1]) == 0 || std::stoul(m[1]) > std::stoul(m[2])) {
					err << "error: --threads-sweep expects a..b with 1 <= a <= b\n";
					return exit_usage;
				}
				lo = std::stoul(m[1]);
				hi = std::stoul(m[2]);
			}
			out << csv_header;
			for (std::size_t t = lo; t <= hi; ++t) {
				EngineFlags f = flags;
				f.threads = t;
				std::optional<WorkerPool> pool;
				if (f.engine == "parallel")
					pool.emplace(t);
				auto [threads, chunks] = effective(f, t, text.size());
				for (std::size_t run = 1; run <= reps; ++run) {
					ParseResult r = run_engine(*g, text, f, pool ? &*pool : nullptr);
					csv_row(out, f, threads, chunks, text.size(), run, r.times);
				}
			}
			return exit_accept;
		}

		ParseResult r = run_engine(*g, text, flags);
		if (!r.accepted) {
			out << "reject at offset " << r.reject_at << '\n';
			return exit_reject;
		}
		if (*query) {
			print_matches(get_matches(r.slpf, g->re, q->group, q->within), text, out);
			return exit_accept;
		}
		if (!dump.empty())
			out << dump_text(*g, dump);
		if (emit == "none") {
			out << "accept\n";
		} else if (emit == "count") {
			std::uint64_t c = count_lsts(r.slpf);
			out << c;
			if (c == std::numeric_limits<std::uint64_t>::max())
				out << " (saturated)";
			out << '\n';
		} else if (emit == "lsts") {
			for (const Lst& l : enumerate_lsts(r.slpf, limit))
				out << render_lst(g->table, l) << '\n';
		} else if (emit == "matches") {
			Query mq = q ? *q : Query{1, std::nullopt};
			print_matches(get_matches(r.slpf, g->re, mq.group, mq.within), text, out);
		} else if (emit == "csv") {
			auto [threads, chunks] = effective(flags, flags.threads ? flags.threads : hardware_threads(), text.size());
			out << csv_header;
			csv_row(out, flags, threads, chunks, text.size(), 1, r.times);
		} else if (emit == "slpf") {
			EncodedSlpf e = encode(r.slpf);
			if (output.empty() || output == "-") {
				write_slpf(out, e);
			} else {
				std::ofstream f(output, std::ios::binary);
				if (!f)
					throw io_error("cannot open " + output);
				write_slpf(f, e);
				f.close();
				if (!f)
					throw io_error("cannot write " + output);
			}
		}
		return exit_accept;
	} catch (const io_error& e) {
		err << "error: " << e.what() << '\n';
		return exit_io;
	} catch (const CLI::ValidationError& e) {
		err << "error: " << e.what() << '\n';
		return exit_usage;
	} catch (const segparse::error& e) {
		err << "error: " << e.what() << '\n';
		return exit_usage;
	}
}

} // namespace segparse::tools
