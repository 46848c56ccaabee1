#include "segparse/segments.hpp"

#include <algorithm>
#include <set>

#include "segparse/error.hpp"

namespace segparse {

namespace {

void collect_symbols(const NumberedRe& re, std::uint32_t num, Symbols& s)
{
	const NumNode& n = re.node(num);
	auto push = [&](SymKind k, std::string text) {
		s.list.push_back({k, num});
		s.text.push_back(std::move(text));
		return static_cast<std::uint32_t>(s.list.size() - 1);
	};
	std::string k = std::to_string(num);
	switch (n.kind) {
	case NumKind::terminal:
		s.leaf[num] = push(SymKind::terminal, n.label + k);
		return;
	case NumKind::epsilon:
		s.leaf[num] = push(SymKind::epsilon, "\xce\xb5" + k);
		return;
	default:
		break;
	}
	s.open[num] = push(SymKind::open, k + "(");
	for (std::uint32_t c : n.children)
		collect_symbols(re, c, s);
	s.close[num] = push(SymKind::close, ")" + k);
}

struct Info {
	bool nullable;
	BitSet first;
	BitSet last;
};

class Glushkov {
public:
	Glushkov(const NumberedRe& re, Followers& out) : re_(re), out_(out), n_(out.syms.size()) {}

	Info leaf(std::uint32_t sym)
	{
		Info i{false, BitSet(n_), BitSet(n_)};
		i.first.set(sym);
		i.last.set(sym);
		return i;
	}

	// Sequential composition, recording followers across the seam.
	Info seq(Info a, const Info& b)
	{
		a.last.for_each([&](std::size_t x) { out_.fol[x] |= b.first; });
		if (a.nullable)
			a.first |= b.first;
		if (b.nullable)
			a.last |= b.last;
		else
			a.last = b.last;
		a.nullable = a.nullable && b.nullable;
		return a;
	}

	Info empty() { return Info{true, BitSet(n_), BitSet(n_)}; }

	Info visit(std::uint32_t num)
	{
		const NumNode& n = re_.node(num);
		const Symbols& s = out_.syms;
		if (n.kind == NumKind::terminal || n.kind == NumKind::epsilon)
			return leaf(s.leaf[num]);

		Info body = empty();
		switch (n.kind) {
		case NumKind::alt: {
			body = Info{false, BitSet(n_), BitSet(n_)};
			for (std::uint32_t c : n.children) {
				Info ci = visit(c);
				body.nullable = body.nullable || ci.nullable;
				body.first |= ci.first;
				body.last |= ci.last;
			}
			break;
		}
		case NumKind::star:
		case NumKind::cross: {
			for (std::uint32_t c : n.children)
				body = seq(std::move(body), visit(c));
			body.last.for_each([&](std::size_t x) { out_.fol[x] |= body.first; });
			if (n.kind == NumKind::star)
				body.nullable = true;
			break;
		}
		case NumKind::optional:
			for (std::uint32_t c : n.children)
				body = seq(std::move(body), visit(c));
			body.nullable = true;
			break;
		default: // concat, repeat, group
			for (std::uint32_t c : n.children)
				body = seq(std::move(body), visit(c));
			break;
		}
		Info r = seq(leaf(s.open[num]), body);
		return seq(std::move(r), leaf(s.close[num]));
	}

private:
	const NumberedRe& re_;
	Followers& out_;
	std::size_t n_;
};

int rank_of(bool initial, bool final)
{
	if (initial && final)
		return 0;
	if (initial)
		return 1;
	if (!final)
		return 2;
	return 3;
}

} // namespace

Symbols make_symbols(const NumberedRe& re)
{
	Symbols s;
	std::size_t n = re.size() + 1;
	s.open.assign(n, no_node);
	s.close.assign(n, no_node);
	s.leaf.assign(n, no_node);
	collect_symbols(re, re.root() + 1, s);
	s.list.push_back({SymKind::end, 0});
	s.text.push_back("\xe2\x8a\xa3");
	s.end = static_cast<std::uint32_t>(s.list.size() - 1);
	return s;
}

Followers classic_followers(const NumberedRe& re)
{
	Followers f;
	f.syms = make_symbols(re);
	f.fol.assign(f.syms.size(), BitSet(f.syms.size()));
	Glushkov g(re, f);
	Info root = g.visit(1);
	root.last.for_each([&](std::size_t x) { f.fol[x].set(f.syms.end); });
	return f;
}

std::vector<StateSet> follower_segments(const SegmentTable& t, const Followers& f)
{
	std::size_t l = t.size();
	std::vector<StateSet> by_first(t.syms.size(), StateSet(l));
	for (std::size_t q = 0; q < l; ++q)
		by_first[t.first(q)].set(q);
	std::vector<StateSet> out(l, StateSet(l));
	for (std::size_t q = 0; q < l; ++q)
		f.fol[t.end_letter(q)].for_each([&](std::size_t s) { out[q] |= by_first[s]; });
	return out;
}

SegmentTable compute_segments(const NumberedRe& re, const SegmentOptions& opt)
{
	if (opt.repeat_limit == 0)
		throw error("repeat limit must be positive");
	Followers f = classic_followers(re);
	const Symbols& syms = f.syms;
	std::size_t ns = syms.size();

	std::vector<std::vector<std::uint32_t>> preds(ns);
	for (std::uint32_t r = 0; r < ns; ++r)
		f.fol[r].for_each([&](std::size_t s) { preds[s].push_back(r); });

	const std::uint32_t init = syms.open[1];
	std::set<std::vector<std::uint32_t>> found;
	// Work items hold a segment under construction in reverse: end-letter first,
	// leftmost symbol last.
	std::vector<std::vector<std::uint32_t>> work;
	for (std::uint32_t a = 0; a < ns; ++a)
		if (syms.is_end_letter(a))
			work.push_back({a});

	const std::size_t max_steps = opt.max_segments * 64 + 4096;
	std::size_t steps = 0;
	auto store = [&](const std::vector<std::uint32_t>& rev) {
		found.emplace(rev.rbegin(), rev.rend());
		if (found.size() > opt.max_segments)
			throw explosion_error("segment count exceeds cap of " + std::to_string(opt.max_segments));
	};
	while (!work.empty()) {
		std::vector<std::uint32_t> rev = std::move(work.back());
		work.pop_back();
		if (++steps > max_steps)
			throw explosion_error("segment construction exceeds step cap");
		std::uint32_t s = rev.back();
		if (s == init) {
			store(rev);
			continue;
		}
		bool complete = false;
		for (std::uint32_t r : preds[s]) {
			if (syms.is_end_letter(r)) {
				complete = true;
				continue;
			}
			if (static_cast<std::size_t>(std::count(rev.begin(), rev.end(), r)) >= opt.repeat_limit)
				continue;
			std::vector<std::uint32_t> next = rev;
			next.push_back(r);
			work.push_back(std::move(next));
		}
		if (complete)
			store(rev);
	}

	std::vector<std::vector<std::uint32_t>> segs(found.begin(), found.end());
	auto key = [&](const std::vector<std::uint32_t>& v) {
		return rank_of(v.front() == init, v.back() == syms.end);
	};
	std::stable_sort(segs.begin(), segs.end(), [&](const auto& a, const auto& b) {
		int ka = key(a), kb = key(b);
		if (ka != kb)
			return ka < kb;
		return a < b;
	});

	SegmentTable t;
	t.syms = syms;
	t.segs = std::move(segs);
	std::size_t l = t.segs.size();
	t.initial = StateSet(l);
	t.final = StateSet(l);
	t.cell_count = re.cells.size();
	t.by_cell.assign(t.cell_count, {});
	t.cells.resize(l);
	for (std::size_t q = 0; q < l; ++q) {
		if (t.first(q) == init)
			t.initial.set(q);
		std::uint32_t e = t.end_letter(q);
		if (e == syms.end) {
			t.final.set(q);
			continue;
		}
		t.cells[q] = re.node(syms.list[e].number).cells;
		for (std::uint16_t c : t.cells[q])
			t.by_cell[c].push_back(static_cast<std::uint32_t>(q));
	}
	t.folseg = follower_segments(t, f);
	return t;
}

std::string SegmentTable::render(std::size_t q) const
{
	std::string s;
	for (std::size_t i = 0; i < segs[q].size(); ++i) {
		if (i)
			s += ' ';
		s += syms.text[segs[q][i]];
	}
	return s;
}

std::string SegmentTable::render_body(std::size_t q) const
{
	std::string s;
	for (std::uint32_t id : segs[q]) {
		if (id == syms.end)
			continue;
		if (!s.empty())
			s += ' ';
		s += syms.text[id];
	}
	return s;
}

std::string SegmentTable::dump() const
{
	std::string out;
	for (std::size_t q = 0; q < size(); ++q) {
		out += std::to_string(q + 1) + ": " + render(q);
		if (initial.test(q))
			out += "  [initial]";
		if (final.test(q))
			out += "  [final]";
		out += '\n';
	}
	return out;
}

std::string SegmentTable::dump_folseg() const
{
	std::string out;
	for (std::size_t q = 0; q < size(); ++q)
		out += std::to_string(q + 1) + " -> " + folseg[q].str() + '\n';
	return out;
}

} // namespace segparse
