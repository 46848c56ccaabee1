#include "segparse/serial.hpp"

#include <chrono>

namespace segparse {

namespace {

using clock_type = std::chrono::steady_clock;

std::uint64_t since(clock_type::time_point t0)
{
	return static_cast<std::uint64_t>(
		std::chrono::duration_cast<std::chrono::nanoseconds>(clock_type::now() - t0).count());
}

bool meets(const word_t* a, const word_t* b, std::size_t w)
{
	for (std::size_t k = 0; k < w; ++k)
		if (a[k] & b[k])
			return true;
	return false;
}

} // namespace

ParseResult parse_serial_nfa(const Grammar& g, std::string_view text)
{
	auto t0 = clock_type::now();
	const std::size_t n = text.size(), l = g.table.size();
	ParseResult res;
	res.slpf = Slpf(g.table, n);
	Slpf& f = res.slpf;
	const std::size_t w = f.words();
	f.set_column(0, g.nfa.initial);

	StateSet cur = g.nfa.initial;
	for (std::size_t r = 1; r <= n; ++r) {
		std::uint16_t cell = g.cell_of(static_cast<unsigned char>(text[r - 1]));
		StateSet next(l);
		if (cell != no_cell)
			cur.for_each([&](std::size_t q) {
				if (const StateSet* s = g.nfa.next(q, cell))
					next |= *s;
			});
		if (next.empty()) {
			res.reject_at = r;
			res.times.total_ns = res.times.build_ns = since(t0);
			return res;
		}
		f.set_column(r, next);
		cur = std::move(next);
	}
	if (!meets(f.column(n), g.nfa.final.data(), w)) {
		res.reject_at = n;
		res.times.total_ns = res.times.build_ns = since(t0);
		return res;
	}

	// Backward from F; each step reads the merged column so the in-place result is clean.
	word_t* last = f.column(n);
	for (std::size_t k = 0; k < w; ++k)
		last[k] &= g.nfa_rev.initial.data()[k];
	for (std::size_t r = n; r > 0; --r) {
		std::uint16_t cell = g.cell_of(static_cast<unsigned char>(text[r - 1]));
		StateSet back(l);
		StateSet col = f.column_set(r);
		col.for_each([&](std::size_t q) {
			if (const StateSet* s = g.nfa_rev.next(q, cell))
				back |= *s;
		});
		word_t* prev = f.column(r - 1);
		for (std::size_t k = 0; k < w; ++k)
			prev[k] &= back.data()[k];
	}
	res.accepted = true;
	res.times.total_ns = res.times.build_ns = since(t0);
	return res;
}

ParseResult parse_serial_dfa(const Grammar& g, std::string_view text)
{
	auto t0 = clock_type::now();
	const std::size_t n = text.size();
	const Dfa& fw = g.dfa;
	const Dfa& bw = g.dfa_rev;
	ParseResult res;
	res.slpf = Slpf(g.table, n);
	Slpf& f = res.slpf;
	const std::size_t w = f.words();
	const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());

	std::uint32_t s = fw.initial;
	std::copy_n(fw.words_of(s), w, f.column(0));
	for (std::size_t r = 1; r <= n; ++r) {
		s = fw.by_byte[s * 256 + bytes[r - 1]];
		if (s == dead_state) {
			res.reject_at = r;
			res.times.total_ns = res.times.build_ns = since(t0);
			return res;
		}
		std::copy_n(fw.words_of(s), w, f.column(r));
	}
	if (!fw.accepting[s]) {
		res.reject_at = n;
		res.times.total_ns = res.times.build_ns = since(t0);
		return res;
	}

	std::uint32_t t = bw.initial;
	for (std::size_t r = n;; --r) {
		word_t* col = f.column(r);
		const word_t* tw = bw.words_of(t);
		for (std::size_t k = 0; k < w; ++k)
			col[k] &= tw[k];
		if (r == 0)
			break;
		t = bw.by_byte[t * 256 + bytes[r - 1]];
	}
	res.accepted = true;
	res.times.total_ns = res.times.build_ns = since(t0);
	return res;
}

bool recognize_serial(const Grammar& g, std::string_view text)
{
	const Dfa& fw = g.dfa;
	std::uint32_t s = fw.initial;
	for (unsigned char b : text) {
		s = fw.by_byte[s * 256 + b];
		if (s == dead_state)
			return false;
	}
	return fw.accepting[s] != 0;
}

} // namespace segparse
