#include "segparse/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>

#include "segparse/error.hpp"

namespace segparse {

namespace {

using clock_type = std::chrono::steady_clock;

std::uint64_t ns_between(clock_type::time_point a, clock_type::time_point b)
{
	return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
}

// Steps run for all entries together before the surviving runs are deduplicated.
constexpr std::size_t lockstep_steps = 8;

std::vector<Range> split(Range r, std::size_t parts)
{
	std::size_t len = r.second - r.first;
	if (len == 0)
		return {r};
	parts = std::clamp<std::size_t>(parts, 1, len);
	std::size_t k = (len + parts - 1) / parts;
	std::vector<Range> out;
	for (std::size_t a = r.first; a < r.second; a += k)
		out.emplace_back(a, std::min(a + k, r.second));
	return out;
}

std::uint32_t run_fw(const Dfa& m, std::uint32_t s, const unsigned char* p, std::size_t a, std::size_t b)
{
	const std::uint32_t* tab = m.by_byte.data();
	for (std::size_t i = a; i < b && s != dead_state; ++i)
		s = tab[std::size_t(s) * 256 + p[i]];
	return s;
}

std::uint32_t run_bw(const Dfa& m, std::uint32_t s, const unsigned char* p, std::size_t a, std::size_t b)
{
	const std::uint32_t* tab = m.by_byte.data();
	for (std::size_t i = b; i > a && s != dead_state; --i)
		s = tab[std::size_t(s) * 256 + p[i - 1]];
	return s;
}

// End state of the run from every entry of a multi-entry machine over one unit.
void entry_runs(const Dfa& m, bool backward, const unsigned char* p, Range u, std::uint32_t* out)
{
	const std::size_t l = m.entries;
	const std::size_t len = u.second - u.first;
	std::vector<std::uint32_t> cur(l);
	std::iota(cur.begin(), cur.end(), 0u);
	const std::size_t steps = std::min(len, lockstep_steps);
	for (std::size_t k = 0; k < steps; ++k) {
		unsigned char b = backward ? p[u.second - 1 - k] : p[u.first + k];
		for (std::uint32_t& s : cur)
			if (s != dead_state)
				s = m.by_byte[std::size_t(s) * 256 + b];
	}
	std::vector<std::uint32_t> distinct;
	for (std::uint32_t s : cur)
		if (s != dead_state)
			distinct.push_back(s);
	std::sort(distinct.begin(), distinct.end());
	distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
	std::vector<std::uint32_t> end(distinct.size());
	for (std::size_t d = 0; d < distinct.size(); ++d)
		end[d] = backward ? run_bw(m, distinct[d], p, u.first, u.second - steps)
		                  : run_fw(m, distinct[d], p, u.first + steps, u.second);
	for (std::size_t j = 0; j < l; ++j) {
		if (cur[j] == dead_state) {
			out[j] = dead_state;
			continue;
		}
		auto it = std::lower_bound(distinct.begin(), distinct.end(), cur[j]);
		out[j] = end[static_cast<std::size_t>(it - distinct.begin())];
	}
}

void require_medfa(const Grammar& g)
{
	if (g.medfa.entries != g.table.size() || g.medfa_rev.entries != g.table.size())
		throw error("grammar was compiled without multi-entry automata");
}

void run_tasks(WorkerPool* pool, std::size_t count, const std::function<void(std::size_t)>& fn)
{
	if (pool)
		pool->run(count, fn);
	else
		for (std::size_t i = 0; i < count; ++i)
			fn(i);
}

// Union of m's state sets over the runs of the entries in from.
StateSet apply(const Dfa& m, const std::uint32_t* runs, const StateSet& from)
{
	StateSet out(m.segments);
	from.for_each([&](std::size_t q) {
		if (runs[q] != dead_state)
			out.or_words(m.words_of(runs[q]));
	});
	return out;
}

const unsigned char* bytes_of(std::string_view text)
{
	return reinterpret_cast<const unsigned char*>(text.data());
}

} // namespace

ChunkPlan plan_chunks(std::size_t n, std::size_t c, std::size_t f)
{
	ChunkPlan p;
	p.length = n;
	p.fragments_per_chunk = std::max<std::size_t>(f, 1);
	p.chunks = split({0, n}, std::max<std::size_t>(c, 1));
	for (const Range& r : p.chunks) {
		auto fr = split(r, p.fragments_per_chunk);
		p.fragments.insert(p.fragments.end(), fr.begin(), fr.end());
	}
	return p;
}

ReachArrays reach(const Grammar& g, const std::vector<Range>& units, std::string_view text, WorkerPool* pool)
{
	require_medfa(g);
	const std::size_t l = g.table.size();
	ReachArrays r;
	r.chunks = units.size();
	r.segments = l;
	r.fw.assign(units.size() * l, StateSet(l));
	r.bw.assign(units.size() * l, StateSet(l));
	const unsigned char* p = bytes_of(text);
	run_tasks(pool, units.size(), [&](std::size_t i) {
		std::vector<std::uint32_t> runs(l);
		entry_runs(g.medfa, false, p, units[i], runs.data());
		for (std::size_t j = 0; j < l; ++j)
			if (runs[j] != dead_state)
				r.fw[i * l + j] = g.medfa.sets[runs[j]];
		entry_runs(g.medfa_rev, true, p, units[i], runs.data());
		for (std::size_t j = 0; j < l; ++j)
			if (runs[j] != dead_state)
				r.bw[i * l + j] = g.medfa_rev.sets[runs[j]];
	});
	return r;
}

JoinColumns join(const ReachArrays& r, const StateSet& initial, const StateSet& final)
{
	const std::size_t c = r.chunks, l = r.segments;
	JoinColumns j;
	j.fw.assign(c + 1, StateSet(l));
	j.bw.assign(c + 2, StateSet(l));
	j.fw[0] = initial;
	for (std::size_t i = 1; i <= c; ++i)
		j.fw[i - 1].for_each([&](std::size_t q) { j.fw[i] |= r.forward(i - 1, q); });
	j.bw[c + 1] = final;
	for (std::size_t i = c; i >= 1; --i)
		j.bw[i + 1].for_each([&](std::size_t q) { j.bw[i] |= r.backward(i - 1, q); });
	return j;
}

void build_and_merge(const Grammar& g, const std::vector<Range>& units, const JoinColumns& j,
                     std::string_view text, Slpf& out, WorkerPool* pool)
{
	const Dfa& fw = g.dfa;
	const Dfa& bw = g.dfa_rev;
	const std::size_t w = out.words();
	const unsigned char* p = bytes_of(text);
	run_tasks(pool, units.size(), [&](std::size_t u) {
		auto [a, b] = units[u];
		std::uint32_t s = fw.find(j.fw[u]);
		std::uint32_t t = bw.find(j.bw[u + 2]);
		if (s == dead_state || t == dead_state)
			throw error("join column is not a state of the deterministic machines");
		if (u == 0)
			std::copy_n(fw.words_of(s), w, out.column(a));
		for (std::size_t r = a + 1; r <= b; ++r) {
			s = fw.by_byte[std::size_t(s) * 256 + p[r - 1]];
			if (s == dead_state)
				throw error("forward build died on an accepted text");
			std::copy_n(fw.words_of(s), w, out.column(r));
		}
		// One temporary state walks back; columns owned by this unit are (a, b], plus 0.
		for (std::size_t r = b;; --r) {
			word_t* col = out.column(r);
			const word_t* tw = bw.words_of(t);
			for (std::size_t k = 0; k < w; ++k)
				col[k] &= tw[k];
			if (r == a + 1 && u != 0)
				break;
			if (r == a)
				break;
			t = bw.by_byte[std::size_t(t) * 256 + p[r - 1]];
			if (t == dead_state)
				throw error("backward build died on an accepted text");
		}
	});
}

ParseResult parse_parallel(const Grammar& g, std::string_view text, const ParallelOptions& opt, WorkerPool* pool)
{
	require_medfa(g);
	const std::size_t n = text.size(), l = g.table.size();
	std::size_t workers = pool ? pool->size() : opt.workers;
	if (workers == 0)
		workers = std::max(1u, std::thread::hardware_concurrency());
	ChunkPlan plan = plan_chunks(n, opt.chunks ? opt.chunks : workers, opt.fragments);
	if (plan.count() == 1)
		return parse_serial_dfa(g, text);
	const std::vector<Range>& units = plan.fragments;
	const std::size_t U = units.size();
	std::optional<WorkerPool> own;
	if (!pool && workers > 1)
		pool = &own.emplace(workers);

	const unsigned char* p = bytes_of(text);
	ParseResult res;
	auto t0 = clock_type::now();

	// Reach. The first unit only runs forward from I and the last only backward from F.
	std::vector<std::uint32_t> fwr(U * l, dead_state), bwr(U * l, dead_state);
	std::uint32_t first = dead_state, last = dead_state;
	run_tasks(pool, U, [&](std::size_t u) {
		if (u == 0)
			first = run_fw(g.dfa, g.dfa.initial, p, units[0].first, units[0].second);
		else if (u == U - 1)
			last = run_bw(g.dfa_rev, g.dfa_rev.initial, p, units[u].first, units[u].second);
		else {
			entry_runs(g.medfa, false, p, units[u], fwr.data() + u * l);
			entry_runs(g.medfa_rev, true, p, units[u], bwr.data() + u * l);
		}
	});
	auto t1 = clock_type::now();

	// Join over units.
	JoinColumns j;
	j.fw.assign(U + 1, StateSet(l));
	j.bw.assign(U + 2, StateSet(l));
	j.fw[0] = g.table.initial;
	if (first != dead_state)
		j.fw[1] = g.dfa.sets[first];
	std::size_t failed = U;
	if (j.fw[1].empty())
		failed = 0;
	for (std::size_t u = 1; failed == U && u + 1 < U; ++u) {
		j.fw[u + 1] = apply(g.medfa, fwr.data() + u * l, j.fw[u]);
		if (j.fw[u + 1].empty())
			failed = u;
	}
	if (failed == U) {
		j.bw[U + 1] = g.table.final;
		if (last != dead_state)
			j.bw[U] = g.dfa_rev.sets[last];
		if (!j.fw[U - 1].intersects(j.bw[U]))
			failed = U - 1;
	}
	if (failed != U) {
		// Serial rescan of the failing unit for the exact offset.
		auto [a, b] = units[failed];
		std::uint32_t s = g.dfa.find(j.fw[failed]);
		std::size_t r = a;
		while (r < b && s != dead_state)
			s = g.dfa.by_byte[std::size_t(s) * 256 + p[r++]];
		res.reject_at = s == dead_state ? r : n;
		auto t2 = clock_type::now();
		res.times.reach_ns = ns_between(t0, t1);
		res.times.join_ns = ns_between(t1, t2);
		res.times.total_ns = ns_between(t0, t2);
		return res;
	}
	for (std::size_t u = U - 1; u-- > 1;)
		j.bw[u + 1] = apply(g.medfa_rev, bwr.data() + u * l, j.bw[u + 2]);
	auto t2 = clock_type::now();

	res.slpf = Slpf(g.table, n);
	build_and_merge(g, units, j, text, res.slpf, pool);
	auto t3 = clock_type::now();
	res.accepted = true;
	res.times.reach_ns = ns_between(t0, t1);
	res.times.join_ns = ns_between(t1, t2);
	res.times.build_ns = ns_between(t2, t3);
	res.times.total_ns = ns_between(t0, t3);
	return res;
}

bool recognize_parallel(const Grammar& g, std::string_view text, const ParallelOptions& opt, WorkerPool* pool)
{
	require_medfa(g);
	const std::size_t n = text.size(), l = g.table.size();
	std::size_t workers = pool ? pool->size() : opt.workers;
	if (workers == 0)
		workers = std::max(1u, std::thread::hardware_concurrency());
	ChunkPlan plan = plan_chunks(n, opt.chunks ? opt.chunks : workers, opt.fragments);
	if (plan.count() == 1)
		return recognize_serial(g, text);
	const std::vector<Range>& units = plan.fragments;
	const std::size_t U = units.size();
	std::optional<WorkerPool> own;
	if (!pool && workers > 1)
		pool = &own.emplace(workers);

	const unsigned char* p = bytes_of(text);
	std::vector<std::uint32_t> fwr(U * l, dead_state);
	std::uint32_t first = dead_state;
	run_tasks(pool, U, [&](std::size_t u) {
		if (u == 0)
			first = run_fw(g.dfa, g.dfa.initial, p, units[0].first, units[0].second);
		else
			entry_runs(g.medfa, false, p, units[u], fwr.data() + u * l);
	});
	if (first == dead_state)
		return false;
	StateSet cur = g.dfa.sets[first];
	for (std::size_t u = 1; u < U; ++u) {
		cur = apply(g.medfa, fwr.data() + u * l, cur);
		if (cur.empty())
			return false;
	}
	return cur.intersects(g.table.final);
}

} // namespace segparse
