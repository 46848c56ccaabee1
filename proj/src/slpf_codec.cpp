#include "segparse/slpf.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <limits>
#include <ostream>

#include <openssl/evp.h>

#include "segparse/error.hpp"

namespace segparse {

namespace {

constexpr std::uint32_t empty_slot = 0xffffffffu;

std::uint64_t hash_words(const std::vector<word_t>& v)
{
	std::uint64_t h = 0xcbf29ce484222325ull ^ v.size();
	for (word_t x : v) {
		h ^= x;
		h *= 0x100000001b3ull;
		h ^= h >> 29;
	}
	return h;
}

} // namespace

std::size_t WideTable::probe(const std::vector<word_t>& bits) const
{
	std::size_t mask = slots_.size() - 1;
	std::size_t i = hash_words(bits) & mask;
	while (slots_[i] != empty_slot && entries_[slots_[i]] != bits)
		i = (i + 1) & mask;
	return i;
}

void WideTable::grow()
{
	std::size_t cap = slots_.empty() ? 16 : slots_.size() * 2;
	slots_.assign(cap, empty_slot);
	for (std::size_t e = 0; e < entries_.size(); ++e)
		slots_[probe(entries_[e])] = static_cast<std::uint32_t>(e);
}

std::uint32_t WideTable::insert(const std::vector<word_t>& bits)
{
	if ((entries_.size() + 1) * 2 > slots_.size())
		grow();
	std::size_t i = probe(bits);
	if (slots_[i] == empty_slot) {
		slots_[i] = static_cast<std::uint32_t>(entries_.size());
		entries_.push_back(bits);
	}
	return slots_[i];
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_list(const SegmentTable& t, const StateSet& prev)
{
	std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
	prev.for_each([&](std::size_t q) {
		std::uint32_t a = t.end_letter(q);
		t.folseg[q].for_each([&](std::size_t s) { pairs.emplace_back(a, static_cast<std::uint32_t>(s)); });
	});
	std::sort(pairs.begin(), pairs.end());
	pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
	return pairs;
}

std::array<std::uint8_t, 32> table_digest(const SegmentTable& t)
{
	std::string text = t.dump() + t.dump_folseg();
	std::array<std::uint8_t, 32> out{};
	unsigned len = 0;
	if (!EVP_Digest(text.data(), text.size(), out.data(), &len, EVP_sha256(), nullptr) || len != out.size())
		throw error("SHA-256 failed");
	return out;
}

namespace {

// Followers that a column may be built from, as a list of segment ids per pair index.
class PairCache {
public:
	explicit PairCache(const SegmentTable& t) : t_(t) {}

	const std::vector<std::uint32_t>& followers(const StateSet& prev)
	{
		auto it = cache_.find(prev);
		if (it != cache_.end())
			return it->second;
		std::vector<std::uint32_t> v;
		for (auto [a, s] : pair_list(t_, prev))
			v.push_back(s);
		return cache_.emplace(prev, std::move(v)).first->second;
	}

private:
	const SegmentTable& t_;
	std::unordered_map<StateSet, std::vector<std::uint32_t>, BitSetHash> cache_;
};

EncodedColumn pack(const std::vector<std::uint32_t>& refs, const StateSet& col, WideTable& wide)
{
	std::vector<word_t> bits(std::max<std::size_t>(1, words_for(refs.size())), 0);
	std::size_t covered = 0;
	StateSet seen(col.size());
	for (std::size_t k = 0; k < refs.size(); ++k)
		if (col.test(refs[k])) {
			bits[k / word_bits] |= word_t(1) << (k % word_bits);
			if (!seen.test(refs[k])) {
				seen.set(refs[k]);
				++covered;
			}
		}
	if (covered != col.count())
		throw format_error("column holds a segment that does not follow the previous column");
	if (refs.size() <= word_bits)
		return {0, bits[0]};
	return {1, wide.insert(bits)};
}

StateSet unpack(const std::vector<std::uint32_t>& refs, const EncodedColumn& c, const WideTable& wide,
                std::size_t l)
{
	StateSet col(l);
	const word_t* bits = nullptr;
	std::size_t words = 0;
	if (c.tag == 0) {
		if (refs.size() < word_bits && (c.value >> refs.size()))
			throw format_error("pair index out of range");
		bits = &c.value;
		words = 1;
	} else if (c.tag == 1) {
		if (c.value >= wide.size())
			throw format_error("wide column index out of range");
		const auto& w = wide.at(static_cast<std::uint32_t>(c.value));
		if (w.size() != words_for(refs.size()))
			throw format_error("wide column has the wrong width");
		bits = w.data();
		words = w.size();
	} else {
		throw format_error("bad column tag");
	}
	for (std::size_t k = 0; k < words; ++k) {
		word_t x = bits[k];
		while (x) {
			std::size_t i = k * word_bits + static_cast<std::size_t>(std::countr_zero(x));
			if (i >= refs.size())
				throw format_error("pair index out of range");
			col.set(refs[i]);
			x &= x - 1;
		}
	}
	return col;
}

std::vector<std::uint32_t> initial_refs(const SegmentTable& t)
{
	std::vector<std::uint32_t> v;
	t.initial.for_each([&](std::size_t q) { v.push_back(static_cast<std::uint32_t>(q)); });
	return v;
}

} // namespace

EncodedSlpf encode(const Slpf& f)
{
	const SegmentTable& t = f.table();
	EncodedSlpf e;
	e.segments = static_cast<std::uint32_t>(t.size());
	e.length = f.length();
	e.digest = table_digest(t);
	e.columns.reserve(f.length() + 1);
	StateSet prev = f.column_set(0);
	e.columns.push_back(pack(initial_refs(t), prev, e.wide));
	PairCache cache(t);
	for (std::size_t r = 1; r <= f.length(); ++r) {
		StateSet cur = f.column_set(r);
		e.columns.push_back(pack(cache.followers(prev), cur, e.wide));
		prev = std::move(cur);
	}
	return e;
}

Slpf decode(const EncodedSlpf& e, const SegmentTable& t)
{
	if (e.segments != t.size())
		throw format_error("segment count does not match the expression");
	if (e.digest != table_digest(t))
		throw format_error("segment table digest does not match the expression");
	if (e.columns.size() != e.length + 1)
		throw format_error("column count does not match the text length");
	Slpf f(t, e.length);
	StateSet prev = unpack(initial_refs(t), e.columns[0], e.wide, t.size());
	f.set_column(0, prev);
	PairCache cache(t);
	for (std::size_t r = 1; r <= e.length; ++r) {
		StateSet cur = unpack(cache.followers(prev), e.columns[r], e.wide, t.size());
		f.set_column(r, cur);
		prev = std::move(cur);
	}
	return f;
}

namespace {

template <class T>
void put(std::ostream& os, T v)
{
	char b[sizeof(T)];
	for (std::size_t i = 0; i < sizeof(T); ++i)
		b[i] = static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
	os.write(b, sizeof(T));
}

template <class T>
T get(std::istream& is)
{
	unsigned char b[sizeof(T)];
	if (!is.read(reinterpret_cast<char*>(b), sizeof(T)))
		throw format_error("truncated forest file");
	std::uint64_t v = 0;
	for (std::size_t i = 0; i < sizeof(T); ++i)
		v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
	return static_cast<T>(v);
}

constexpr char magic[5] = {'S', 'L', 'P', 'F', '1'};

} // namespace

void write_slpf(std::ostream& os, const EncodedSlpf& e)
{
	os.write(magic, sizeof magic);
	put<std::uint32_t>(os, e.segments);
	put<std::uint64_t>(os, e.length);
	os.write(reinterpret_cast<const char*>(e.digest.data()), e.digest.size());
	for (const EncodedColumn& c : e.columns) {
		put<std::uint8_t>(os, c.tag);
		if (c.tag == 0)
			put<std::uint64_t>(os, c.value);
		else
			put<std::uint32_t>(os, static_cast<std::uint32_t>(c.value));
	}
	put<std::uint32_t>(os, static_cast<std::uint32_t>(e.wide.size()));
	for (const auto& w : e.wide.entries()) {
		put<std::uint32_t>(os, static_cast<std::uint32_t>(w.size()));
		for (word_t x : w)
			put<std::uint64_t>(os, x);
	}
	if (!os)
		throw error("write failed");
}

EncodedSlpf read_slpf(std::istream& is)
{
	char m[sizeof magic];
	if (!is.read(m, sizeof m) || !std::equal(m, m + sizeof m, magic))
		throw format_error("not a forest file");
	EncodedSlpf e;
	e.segments = get<std::uint32_t>(is);
	e.length = get<std::uint64_t>(is);
	if (!is.read(reinterpret_cast<char*>(e.digest.data()), e.digest.size()))
		throw format_error("truncated forest file");
	if (e.length == std::numeric_limits<std::uint64_t>::max())
		throw format_error("bad text length");
	for (std::uint64_t r = 0; r <= e.length; ++r) {
		EncodedColumn c;
		c.tag = get<std::uint8_t>(is);
		if (c.tag == 0)
			c.value = get<std::uint64_t>(is);
		else if (c.tag == 1)
			c.value = get<std::uint32_t>(is);
		else
			throw format_error("bad column tag");
		e.columns.push_back(c);
	}
	auto count = get<std::uint32_t>(is);
	for (std::uint32_t i = 0; i < count; ++i) {
		auto words = get<std::uint32_t>(is);
		std::vector<word_t> w;
		for (std::uint32_t k = 0; k < words; ++k)
			w.push_back(get<std::uint64_t>(is));
		if (e.wide.insert(w) != i)
			throw format_error("duplicate wide column");
	}
	return e;
}

SlpfDfa compress_to_dfa(const Slpf& f, std::string_view text)
{
	if (text.size() != f.length())
		throw error("text length does not match the forest");
	SlpfDfa d;
	std::unordered_map<StateSet, std::uint32_t, BitSetHash> ids;
	auto id_of = [&](const StateSet& s) {
		auto [it, fresh] = ids.try_emplace(s, static_cast<std::uint32_t>(d.states.size()));
		if (fresh)
			d.states.push_back(s);
		return it->second;
	};
	std::uint32_t cur = d.initial = id_of(f.column_set(0));
	for (std::size_t r = 1; r <= f.length(); ++r) {
		std::uint32_t next = id_of(f.column_set(r));
		std::uint64_t key = (std::uint64_t(cur) << 8) | static_cast<unsigned char>(text[r - 1]);
		auto [it, fresh] = d.delta.try_emplace(key, next);
		if (!fresh && it->second != next)
			d.overrides.emplace_back(r, next);
		cur = next;
	}
	return d;
}

Slpf replay(const SlpfDfa& d, const SegmentTable& t, std::string_view text)
{
	if (d.initial >= d.states.size())
		throw format_error("bad initial column");
	Slpf f(t, text.size());
	std::uint32_t cur = d.initial;
	f.set_column(0, d.states[cur]);
	std::size_t o = 0;
	for (std::size_t r = 1; r <= text.size(); ++r) {
		if (o < d.overrides.size() && d.overrides[o].first == r) {
			cur = d.overrides[o++].second;
		} else {
			auto it = d.delta.find((std::uint64_t(cur) << 8) | static_cast<unsigned char>(text[r - 1]));
			if (it == d.delta.end())
				throw format_error("no column transition at offset " + std::to_string(r - 1));
			cur = it->second;
		}
		if (cur >= d.states.size())
			throw format_error("bad column state");
		f.set_column(r, d.states[cur]);
	}
	return f;
}

} // namespace segparse
