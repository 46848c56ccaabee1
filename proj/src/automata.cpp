#include "segparse/automata.hpp"

#include <unordered_map>

#include "segparse/error.hpp"

namespace segparse {

namespace {

std::string cell_label(const NumberedRe& re, std::size_t cell)
{
	const CharSet& s = re.cells[cell];
	if (s.count() == 1)
		return char_label(static_cast<unsigned char>(s._Find_first()));
	return set_label(s);
}

ParserNfa transpose(const ParserNfa& nfa)
{
	ParserNfa r;
	r.states = nfa.states;
	r.cells = nfa.cells;
	r.reversed = !nfa.reversed;
	r.initial = nfa.final;
	r.final = nfa.initial;
	r.index.assign(nfa.states * nfa.cells, dead_state);
	std::unordered_map<std::size_t, StateSet> pred;
	for (std::size_t q = 0; q < nfa.states; ++q)
		for (std::size_t c = 0; c < nfa.cells; ++c)
			if (const StateSet* s = nfa.next(q, c))
				s->for_each([&](std::size_t t) {
					auto [it, fresh] = pred.try_emplace(t * nfa.cells + c, nfa.states);
					it->second.set(q);
				});
	std::unordered_map<StateSet, std::uint32_t, BitSetHash> pool;
	for (std::size_t key = 0; key < nfa.states * nfa.cells; ++key) {
		auto it = pred.find(key);
		if (it == pred.end())
			continue;
		auto [p, fresh] = pool.try_emplace(it->second, static_cast<std::uint32_t>(r.sets.size()));
		if (fresh)
			r.sets.push_back(it->second);
		r.index[key] = p->second;
	}
	return r;
}

class Explorer {
public:
	Explorer(const ParserNfa& nfa, const DfaOptions& opt) : nfa_(nfa), opt_(opt)
	{
		d_.segments = nfa.states;
		d_.cells = nfa.cells;
		d_.reversed = nfa.reversed;
	}

	std::uint32_t add(const StateSet& s)
	{
		auto [it, fresh] = d_.lookup.try_emplace(s, static_cast<std::uint32_t>(d_.sets.size()));
		if (!fresh)
			return it->second;
		if (d_.sets.size() >= opt_.max_states)
			throw explosion_error("automaton state count exceeds cap of " + std::to_string(opt_.max_states));
		d_.sets.push_back(s);
		d_.delta.resize(d_.delta.size() + d_.cells, dead_state);
		d_.accepting.push_back(s.intersects(nfa_.final) ? 1 : 0);
		explored_.push_back(0);
		return it->second;
	}

	// Depth-first: a newly created state is explored before its parent's remaining cells.
	// States that already exist (such as entry singletons) keep their own turn.
	void explore(std::uint32_t start)
	{
		if (explored_[start])
			return;
		explored_[start] = 1;
		std::vector<std::pair<std::uint32_t, std::size_t>> stack{{start, 0}};
		while (!stack.empty()) {
			auto& [st, c] = stack.back();
			if (c == d_.cells) {
				stack.pop_back();
				continue;
			}
			std::uint32_t from = st;
			std::size_t cell = c++;
			StateSet t = nfa_.step(d_.sets[from], cell);
			if (t.empty())
				continue;
			std::size_t before = d_.sets.size();
			std::uint32_t id = add(t);
			d_.delta[from * d_.cells + cell] = id;
			if (d_.sets.size() > before) {
				explored_[id] = 1;
				stack.emplace_back(id, 0);
			}
		}
	}

	Dfa take() { return std::move(d_); }

private:
	const ParserNfa& nfa_;
	const DfaOptions& opt_;
	Dfa d_;
	std::vector<std::uint8_t> explored_;
};

} // namespace

StateSet ParserNfa::step(const StateSet& from, std::size_t cell) const
{
	StateSet out(states);
	from.for_each([&](std::size_t q) {
		if (const StateSet* s = next(q, cell))
			out |= *s;
	});
	return out;
}

bool ParserNfa::same_relation(const ParserNfa& o) const
{
	if (states != o.states || cells != o.cells || reversed != o.reversed)
		return false;
	if (!(initial == o.initial) || !(final == o.final))
		return false;
	StateSet none(states);
	for (std::size_t q = 0; q < states; ++q)
		for (std::size_t c = 0; c < cells; ++c) {
			const StateSet* a = next(q, c);
			const StateSet* b = o.next(q, c);
			if (!((a ? *a : none) == (b ? *b : none)))
				return false;
		}
	return true;
}

std::size_t ParserNfa::arc_count() const
{
	std::size_t n = 0;
	for (std::size_t q = 0; q < states; ++q)
		for (std::size_t c = 0; c < cells; ++c)
			if (const StateSet* s = next(q, c))
				n += s->count();
	return n;
}

std::string ParserNfa::dump(const SegmentTable& t, const NumberedRe& re) const
{
	std::string out = reversed ? "reverse parser NFA\n" : "parser NFA\n";
	out += "initial " + initial.str() + "\nfinal " + final.str() + '\n';
	for (std::size_t q = 0; q < states; ++q) {
		out += std::to_string(q + 1) + " [" + t.render(q) + "]";
		for (std::size_t c = 0; c < cells; ++c)
			if (const StateSet* s = next(q, c))
				out += "  " + cell_label(re, c) + " -> " + s->str();
		out += '\n';
	}
	return out;
}

ParserNfa build_nfa(const SegmentTable& t)
{
	ParserNfa n;
	n.states = t.size();
	n.cells = t.cell_count;
	n.initial = t.initial;
	n.final = t.final;
	n.sets = t.folseg;
	n.index.assign(n.states * n.cells, dead_state);
	for (std::size_t q = 0; q < n.states; ++q) {
		if (t.folseg[q].empty())
			continue;
		for (std::uint16_t c : t.cells[q])
			n.index[q * n.cells + c] = static_cast<std::uint32_t>(q);
	}
	return n;
}

ParserNfa reverse(const ParserNfa& nfa)
{
	return transpose(nfa);
}

std::uint32_t Dfa::find(const StateSet& s) const
{
	auto it = lookup.find(s);
	return it == lookup.end() ? dead_state : it->second;
}

void Dfa::finalize(const NumberedRe& re)
{
	words = words_for(segments);
	by_byte.assign(sets.size() * 256, dead_state);
	set_words.assign(sets.size() * words, 0);
	for (std::size_t s = 0; s < sets.size(); ++s) {
		for (unsigned b = 0; b < 256; ++b) {
			std::uint16_t c = re.byte_cell[b];
			if (c != no_cell)
				by_byte[s * 256 + b] = delta[s * cells + c];
		}
		for (std::size_t k = 0; k < words; ++k)
			set_words[s * words + k] = sets[s].data()[k];
	}
}

std::string Dfa::dump(const SegmentTable&, const NumberedRe& re) const
{
	std::string out;
	out += entries ? "multi-entry DFA" : "DFA";
	if (reversed)
		out += " (reverse)";
	out += ", " + std::to_string(sets.size()) + " states";
	if (entries)
		out += ", " + std::to_string(entries) + " entries";
	out += '\n';
	std::string tag = entries ? "S" : "T";
	for (std::size_t s = 0; s < sets.size(); ++s) {
		out += tag + std::to_string(s + 1) + " = " + sets[s].str();
		if (s == initial)
			out += " initial";
		if (accepting[s])
			out += " final";
		for (std::size_t c = 0; c < cells; ++c) {
			std::uint32_t t = delta[s * cells + c];
			if (t != dead_state)
				out += "  " + cell_label(re, c) + " -> " + tag + std::to_string(t + 1);
		}
		out += '\n';
	}
	return out;
}

Dfa determinize(const ParserNfa& nfa, const DfaOptions& opt)
{
	Explorer e(nfa, opt);
	std::uint32_t s = e.add(nfa.initial);
	e.explore(s);
	Dfa d = e.take();
	d.initial = s;
	d.base_states = d.size();
	return d;
}

Dfa build_medfa(const ParserNfa& nfa, const DfaOptions& opt)
{
	Explorer e(nfa, opt);
	for (std::size_t q = 0; q < nfa.states; ++q) {
		StateSet s(nfa.states);
		s.set(q);
		e.add(s);
	}
	for (std::size_t q = 0; q < nfa.states; ++q)
		e.explore(static_cast<std::uint32_t>(q));
	Dfa d = e.take();
	d.entries = nfa.states;
	d.initial = d.find(nfa.initial);
	d.base_states = d.size();
	return d;
}

Dfa merge_dfa_into_medfa(const Dfa& dfa, const Dfa& medfa)
{
	Dfa m = medfa;
	m.by_byte.clear();
	m.set_words.clear();
	std::vector<std::uint32_t> map(dfa.size());
	std::vector<std::uint8_t> fresh(dfa.size(), 0);
	for (std::size_t s = 0; s < dfa.size(); ++s) {
		auto [it, added] = m.lookup.try_emplace(dfa.sets[s], static_cast<std::uint32_t>(m.sets.size()));
		if (added) {
			m.sets.push_back(dfa.sets[s]);
			m.delta.resize(m.delta.size() + m.cells, dead_state);
			m.accepting.push_back(dfa.accepting[s]);
			fresh[s] = 1;
		}
		map[s] = it->second;
	}
	for (std::size_t s = 0; s < dfa.size(); ++s) {
		if (!fresh[s])
			continue;
		for (std::size_t c = 0; c < m.cells; ++c) {
			std::uint32_t t = dfa.delta[s * dfa.cells + c];
			m.delta[map[s] * m.cells + c] = t == dead_state ? dead_state : map[t];
		}
	}
	m.initial = map[dfa.initial];
	return m;
}

std::shared_ptr<const Grammar> compile(const ReAst& ast, const GrammarOptions& opt)
{
	auto g = std::make_shared<Grammar>();
	g->re = number_re(ast);
	g->table = compute_segments(g->re, opt.segments);
	g->nfa = build_nfa(g->table);
	g->nfa_rev = reverse(g->nfa);
	g->dfa = determinize(g->nfa, opt.dfa);
	g->dfa_rev = determinize(g->nfa_rev, opt.dfa);
	g->dfa.finalize(g->re);
	g->dfa_rev.finalize(g->re);
	if (opt.multi_entry) {
		g->medfa = merge_dfa_into_medfa(g->dfa, build_medfa(g->nfa, opt.dfa));
		g->medfa_rev = merge_dfa_into_medfa(g->dfa_rev, build_medfa(g->nfa_rev, opt.dfa));
		g->medfa.finalize(g->re);
		g->medfa_rev.finalize(g->re);
	}
	return g;
}

std::shared_ptr<const Grammar> compile(std::string_view source, const GrammarOptions& opt)
{
	return compile(parse_re(source), opt);
}

} // namespace segparse
