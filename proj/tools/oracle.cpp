#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "segparse/parallel.hpp"
#include "segparse/serial.hpp"

namespace segparse::tools {

std::vector<Lst> nfa_runs(const Grammar& g, std::string_view text)
{
	std::vector<Lst> out;
	const std::size_t n = text.size();
	Lst path(n + 1);
	// frames[d] lists the candidates for position d and the next one to try
	std::vector<std::vector<std::uint32_t>> cand(n + 1);
	std::vector<std::size_t> pos(n + 1, 0);
	g.table.initial.for_each([&](std::size_t q) { cand[0].push_back(static_cast<std::uint32_t>(q)); });
	std::size_t d = 0;
	for (;;) {
		if (pos[d] == cand[d].size()) {
			if (d == 0)
				break;
			--d;
			continue;
		}
		std::uint32_t q = cand[d][pos[d]++];
		path[d] = q;
		if (d == n) {
			if (g.table.final.test(q))
				out.push_back(path);
			continue;
		}
		cand[d + 1].clear();
		std::uint16_t c = g.cell_of(static_cast<unsigned char>(text[d]));
		if (c != no_cell)
			if (const StateSet* s = g.nfa.next(q, c))
				s->for_each([&](std::size_t t) { cand[d + 1].push_back(static_cast<std::uint32_t>(t)); });
		++d;
		pos[d] = 0;
	}
	std::sort(out.begin(), out.end());
	return out;
}

namespace {

std::string printable(std::string_view s)
{
	std::string r = "\"";
	for (unsigned char c : s) {
		if (c >= 0x20 && c < 0x7f && c != '"' && c != '\\')
			r += static_cast<char>(c);
		else {
			static const char* hex = "0123456789abcdef";
			r += "\\x";
			r += hex[c >> 4];
			r += hex[c & 15];
		}
	}
	return r + "\"";
}

// Columns used by a set of runs.
Slpf columns_of(const Grammar& g, const std::vector<Lst>& runs, std::size_t n)
{
	Slpf f(g.table, n);
	for (const Lst& p : runs)
		for (std::size_t r = 0; r <= n; ++r)
			f.column(r)[p[r] / word_bits] |= word_t(1) << (p[r] % word_bits);
	return f;
}

// An LST must be balanced and spell the text once its numbers are dropped.
bool well_formed(const Grammar& g, const Lst& p, std::string_view text)
{
	std::vector<std::uint32_t> stack;
	std::size_t at = 0;
	for (std::uint32_t q : p)
		for (std::uint32_t s : g.table.segs[q]) {
			const Symbol& sym = g.table.syms.list[s];
			switch (sym.kind) {
			case SymKind::open:
				stack.push_back(sym.number);
				break;
			case SymKind::close:
				if (stack.empty() || stack.back() != sym.number)
					return false;
				stack.pop_back();
				break;
			case SymKind::terminal:
				if (at >= text.size() || !g.re.node(sym.number).chars.test(static_cast<unsigned char>(text[at])))
					return false;
				++at;
				break;
			default:
				break;
			}
		}
	return stack.empty() && at == text.size();
}

} // namespace

int run_oracle(const Grammar& g, std::size_t max_len, std::ostream& out)
{
	std::string reps;
	for (const CharSet& c : g.re.cells)
		reps += static_cast<char>(c._Find_first());

	std::map<std::string, int> failures;
	std::map<std::string, std::string> example;
	auto check = [&](const char* name, bool ok, std::string_view text) {
		int& f = failures[name];
		if (!ok && f++ == 0)
			example[name] = printable(text);
	};

	std::size_t strings = 0, accepted = 0;
	std::vector<std::size_t> idx;
	std::string text;
	for (std::size_t len = 0; len <= max_len; ++len) {
		idx.assign(len, 0);
		for (;;) {
			text.resize(len);
			for (std::size_t i = 0; i < len; ++i)
				text[i] = reps[idx[i]];
			++strings;

			auto runs = nfa_runs(g, text);
			bool acc = !runs.empty();
			accepted += acc;
			auto sn = parse_serial_nfa(g, text);
			auto sd = parse_serial_dfa(g, text);
			check("serial-nfa acceptance", sn.accepted == acc, text);
			check("serial-dfa acceptance", sd.accepted == acc, text);
			check("recognizer", recognize_serial(g, text) == acc, text);
			bool wf = true;
			for (const Lst& p : runs)
				wf = wf && well_formed(g, p, text);
			check("segment factorization", wf, text);
			if (acc) {
				Slpf want = columns_of(g, runs, len);
				check("serial-nfa columns", sn.slpf == want, text);
				check("serial-dfa columns", sd.slpf == want, text);
				check("lst enumeration", enumerate_lsts(sd.slpf, runs.size() + 1) == runs, text);
				check("lst count", count_lsts(sd.slpf) == runs.size(), text);
				out << "accept " << printable(text) << " runs=" << runs.size() << '\n';
			}
			if (g.medfa.entries == g.table.size())
				for (std::size_t c : {1, 2, 3}) {
					auto pp = parse_parallel(g, text, {c, 1, 4});
					bool ok = pp.accepted == acc && (!acc || pp.slpf == sd.slpf) && (acc || pp.reject_at == sd.reject_at);
					check("parallel engine", ok, text);
					check("parallel recognizer", recognize_parallel(g, text, {c, 1, 4}) == acc, text);
				}

			std::size_t k = 0;
			while (k < len && ++idx[k] == reps.size())
				idx[k++] = 0;
			if (k == len)
				break;
		}
	}
	out << "strings " << strings << ", accepted " << accepted << '\n';
	out << "segments " << g.table.size() << ", DFA states " << g.dfa.size();
	if (g.medfa.entries)
		out << ", ME-DFA states " << g.medfa.base_states << " (" << g.medfa.entries << " entries)";
	out << '\n';
	int failed = 0;
	for (auto& [name, f] : failures) {
		if (f)
			++failed;
		out << (f ? "FAIL " : "pass ") << name;
		if (f)
			out << " (" << f << " mismatches, first on " << example[name] << ")";
		out << '\n';
	}
	return failed;
}

} // namespace segparse::tools
