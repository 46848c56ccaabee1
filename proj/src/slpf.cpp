#include "segparse/slpf.hpp"

#include <algorithm>
#include <limits>

#include "segparse/error.hpp"

namespace segparse {

Slpf::Slpf(const SegmentTable& table, std::size_t n)
	: table_(&table), n_(n), words_(words_for(table.size())), cols_((n + 1) * words_for(table.size()), 0)
{
}

StateSet Slpf::column_set(std::size_t r) const
{
	return StateSet::from_words(segments(), {column(r), words_});
}

void Slpf::set_column(std::size_t r, const StateSet& s)
{
	std::copy_n(s.data(), words_, column(r));
}

std::size_t Slpf::memory_words() const noexcept
{
	return cols_.capacity() + (sizeof(Slpf) + sizeof(word_t) - 1) / sizeof(word_t);
}

std::string Slpf::str() const
{
	std::string s;
	for (std::size_t r = 0; r <= n_; ++r) {
		if (r)
			s += ' ';
		s += column_set(r).str();
	}
	return s;
}

namespace {

// Union of FolSeg over the segments of a column.
StateSet successors(const SegmentTable& t, const word_t* col, std::size_t words)
{
	StateSet out(t.size());
	for (std::size_t k = 0; k < words; ++k) {
		word_t x = col[k];
		while (x) {
			std::size_t q = k * word_bits + static_cast<std::size_t>(std::countr_zero(x));
			out |= t.folseg[q];
			x &= x - 1;
		}
	}
	return out;
}

template <class F>
void for_each_bit(const word_t* w, std::size_t words, F&& f)
{
	for (std::size_t k = 0; k < words; ++k) {
		word_t x = w[k];
		while (x) {
			f(k * word_bits + static_cast<std::size_t>(std::countr_zero(x)));
			x &= x - 1;
		}
	}
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b)
{
	return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

} // namespace

bool clean(Slpf& f)
{
	if (f.segments() == 0)
		return false;
	const SegmentTable& t = f.table();
	const std::size_t n = f.length(), w = f.words();
	for (std::size_t k = 0; k < w; ++k)
		f.column(0)[k] &= t.initial.data()[k];
	for (std::size_t r = 1; r <= n; ++r) {
		StateSet succ = successors(t, f.column(r - 1), w);
		for (std::size_t k = 0; k < w; ++k)
			f.column(r)[k] &= succ.data()[k];
	}
	for (std::size_t k = 0; k < w; ++k)
		f.column(n)[k] &= t.final.data()[k];
	for (std::size_t r = n; r-- > 0;) {
		StateSet next = f.column_set(r + 1);
		word_t* col = f.column(r);
		for_each_bit(f.column(r), w, [&](std::size_t q) {
			if (!t.folseg[q].intersects(next))
				col[q / word_bits] &= ~(word_t(1) << (q % word_bits));
		});
	}
	for (std::size_t k = 0; k < w; ++k)
		if (f.column(0)[k])
			return true;
	return false;
}

bool is_clean(const Slpf& f)
{
	Slpf g = f;
	clean(g);
	return g == f;
}

std::vector<Lst> enumerate_lsts(const Slpf& f, std::size_t limit)
{
	std::vector<Lst> out;
	if (limit == 0 || f.segments() == 0)
		return out;
	const SegmentTable& t = f.table();
	const std::size_t n = f.length(), w = f.words();
	std::vector<std::vector<std::uint32_t>> cand(n + 1);
	std::vector<std::size_t> pos(n + 1, 0);
	Lst path(n + 1);
	for_each_bit(f.column(0), w, [&](std::size_t q) {
		if (t.initial.test(q))
			cand[0].push_back(static_cast<std::uint32_t>(q));
	});
	std::size_t depth = 0;
	for (;;) {
		if (pos[depth] == cand[depth].size()) {
			if (depth == 0)
				break;
			--depth;
			continue;
		}
		std::uint32_t q = cand[depth][pos[depth]++];
		path[depth] = q;
		if (depth == n) {
			if (t.final.test(q)) {
				out.push_back(path);
				if (out.size() == limit)
					break;
			}
			continue;
		}
		auto& next = cand[depth + 1];
		next.clear();
		const word_t* fol = t.folseg[q].data();
		const word_t* col = f.column(depth + 1);
		for (std::size_t k = 0; k < w; ++k) {
			word_t x = fol[k] & col[k];
			while (x) {
				next.push_back(static_cast<std::uint32_t>(k * word_bits + std::countr_zero(x)));
				x &= x - 1;
			}
		}
		++depth;
		pos[depth] = 0;
	}
	return out;
}

std::string render_lst(const SegmentTable& t, const Lst& lst)
{
	std::string s;
	for (std::uint32_t q : lst) {
		std::string body = t.render_body(q);
		if (body.empty())
			continue;
		if (!s.empty())
			s += ' ';
		s += body;
	}
	return s;
}

std::uint64_t count_lsts(const Slpf& f)
{
	if (f.segments() == 0)
		return 0;
	const SegmentTable& t = f.table();
	const std::size_t n = f.length(), l = f.segments(), w = f.words();
	std::vector<std::uint64_t> ways(l, 0), next(l, 0);
	for_each_bit(f.column(0), w, [&](std::size_t q) {
		if (t.initial.test(q))
			ways[q] = 1;
	});
	for (std::size_t r = 1; r <= n; ++r) {
		std::fill(next.begin(), next.end(), 0);
		const word_t* col = f.column(r);
		for_each_bit(f.column(r - 1), w, [&](std::size_t q) {
			if (!ways[q])
				return;
			const word_t* fol = t.folseg[q].data();
			for (std::size_t k = 0; k < w; ++k) {
				word_t x = fol[k] & col[k];
				while (x) {
					std::size_t s = k * word_bits + static_cast<std::size_t>(std::countr_zero(x));
					next[s] = sat_add(next[s], ways[q]);
					x &= x - 1;
				}
			}
		});
		ways.swap(next);
	}
	std::uint64_t total = 0;
	for_each_bit(f.column(n), w, [&](std::size_t q) {
		if (t.final.test(q))
			total = sat_add(total, ways[q]);
	});
	return total;
}

// --- match extraction ---

namespace {

struct Event {
	std::uint32_t index; // position inside the segment
	bool open;
};

// Positions of g( and )g inside every segment.
std::vector<std::vector<Event>> group_events(const SegmentTable& t, std::uint32_t g)
{
	std::uint32_t o = t.syms.open[g], c = t.syms.close[g];
	std::vector<std::vector<Event>> ev(t.size());
	for (std::size_t q = 0; q < t.size(); ++q)
		for (std::size_t i = 0; i < t.segs[q].size(); ++i) {
			std::uint32_t s = t.segs[q][i];
			if (s == o || s == c)
				ev[q].push_back({static_cast<std::uint32_t>(i), s == o});
		}
	return ev;
}

// A segment in a column, restricted to the symbol positions [from, to).
struct Node {
	std::uint32_t seg;
	std::uint32_t from;
	std::uint32_t to;
};

using SpanSet = std::vector<std::pair<std::size_t, std::size_t>>;

// Spans of one group inside a region of the forest spanning columns [lo, hi]. Nodes(r, fn)
// calls fn for every node of column r. Only nodes that run to the end of their segment
// continue into the next column, and only nodes starting at position 0 are entered from
// the previous column.
template <class Nodes>
void find_spans(const SegmentTable& t, const std::vector<std::vector<Event>>& ev, Nodes&& nodes,
                std::size_t lo, std::size_t hi, SpanSet& out)
{
	const std::size_t l = t.size();
	for (std::size_t r = lo; r <= hi; ++r) {
		StateSet pending(l);
		bool any = false;
		nodes(r, [&](const Node& nd) {
			const auto& e = ev[nd.seg];
			for (std::size_t k = 0; k < e.size(); ++k) {
				if (!e[k].open || e[k].index < nd.from || e[k].index >= nd.to)
					continue;
				if (k + 1 < e.size() && e[k + 1].index < nd.to) {
					if (!e[k + 1].open)
						out.emplace_back(r, r);
				} else if (nd.to == t.segs[nd.seg].size() && r < hi) {
					pending.set(nd.seg);
					any = true;
				}
			}
		});
		if (!any)
			continue;
		for (std::size_t c = r + 1; c <= hi && any; ++c) {
			StateSet succ(l);
			pending.for_each([&](std::size_t q) { succ |= t.folseg[q]; });
			StateSet next(l);
			any = false;
			nodes(c, [&](const Node& nd) {
				if (nd.from != 0 || !succ.test(nd.seg))
					return;
				const auto& e = ev[nd.seg];
				if (!e.empty() && e[0].index < nd.to) {
					if (!e[0].open)
						out.emplace_back(r, c);
				} else if (nd.to == t.segs[nd.seg].size() && c < hi) {
					next.set(nd.seg);
					any = true;
				}
			});
			pending = std::move(next);
		}
	}
}

void check_group(const Slpf& f, const NumberedRe& re, std::uint32_t g)
{
	if (f.segments() == 0 || f.table().syms.open.size() != re.size() + 1)
		throw query_error("forest does not belong to this expression");
	if (!re.is_operator(g))
		throw query_error("unknown group " + std::to_string(g));
}

void append(const SpanSet& spans, std::uint32_t g, std::vector<MatchSpan>& out)
{
	for (auto [s, e] : spans)
		out.push_back({s, e, g});
}

} // namespace

std::vector<MatchSpan> get_matches(const Slpf& f, const NumberedRe& re, std::uint32_t group,
                                   std::optional<std::uint32_t> within)
{
	check_group(f, re, group);
	if (within) {
		check_group(f, re, *within);
		if (!re.encloses(*within, group))
			return {};
	}
	const SegmentTable& t = f.table();
	auto ev = group_events(t, group);
	const std::size_t w = f.words();
	SpanSet spans;
	auto nodes = [&](std::size_t r, auto&& fn) {
		for_each_bit(f.column(r), w, [&](std::size_t q) {
			fn(Node{static_cast<std::uint32_t>(q), 0, static_cast<std::uint32_t>(t.segs[q].size())});
		});
	};
	find_spans(t, ev, nodes, 0, f.length(), spans);
	std::vector<MatchSpan> out;
	append(spans, group, out);
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

std::vector<MatchSpan> get_children(const Slpf& f, const NumberedRe& re, const MatchSpan& span)
{
	const std::uint32_t g = span.group;
	check_group(f, re, g);
	const std::size_t s0 = span.start, e0 = span.end;
	if (s0 > e0 || e0 > f.length())
		throw query_error("span is not in this forest");
	const SegmentTable& t = f.table();
	const std::size_t l = t.size(), w = f.words();
	auto ev = group_events(t, g);

	// Nodes lying inside the occurrence, column by column.
	std::vector<std::vector<Node>> reg(e0 - s0 + 1);
	for_each_bit(f.column(s0), w, [&](std::size_t q) {
		const auto& e = ev[q];
		auto len = static_cast<std::uint32_t>(t.segs[q].size());
		for (std::size_t k = 0; k < e.size(); ++k) {
			if (!e[k].open)
				continue;
			if (k + 1 < e.size()) {
				if (s0 == e0 && !e[k + 1].open)
					reg[0].push_back({static_cast<std::uint32_t>(q), e[k].index + 1, e[k + 1].index});
			} else if (s0 < e0) {
				reg[0].push_back({static_cast<std::uint32_t>(q), e[k].index + 1, len});
			}
		}
	});
	if (s0 < e0) {
		for (std::size_t r = s0 + 1; r <= e0; ++r) {
			StateSet succ(l);
			for (const Node& nd : reg[r - 1 - s0])
				succ |= t.folseg[nd.seg];
			auto& cur = reg[r - s0];
			for_each_bit(f.column(r), w, [&](std::size_t q) {
				if (!succ.test(q))
					return;
				const auto& e = ev[q];
				auto len = static_cast<std::uint32_t>(t.segs[q].size());
				if (!e.empty()) {
					if (r == e0 && !e[0].open)
						cur.push_back({static_cast<std::uint32_t>(q), 0, e[0].index});
				} else if (r < e0) {
					cur.push_back({static_cast<std::uint32_t>(q), 0, len});
				}
			});
		}
		for (std::size_t r = e0; r-- > s0;) {
			StateSet alive(l);
			for (const Node& nd : reg[r + 1 - s0])
				alive.set(nd.seg);
			auto& cur = reg[r - s0];
			std::erase_if(cur, [&](const Node& nd) { return !t.folseg[nd.seg].intersects(alive); });
		}
	}
	if (reg[0].empty() || reg.back().empty())
		throw query_error("span is not in this forest");

	auto nodes = [&](std::size_t r, auto&& fn) {
		for (const Node& nd : reg[r - s0])
			fn(nd);
	};
	std::vector<MatchSpan> out;
	for (std::uint32_t c : re.operator_children(g)) {
		SpanSet spans;
		find_spans(t, group_events(t, c), nodes, s0, e0, spans);
		append(spans, c, out);
	}
	std::sort(out.begin(), out.end());
	out.erase(std::unique(out.begin(), out.end()), out.end());
	return out;
}

} // namespace segparse
