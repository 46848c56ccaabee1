#ifndef SEGPARSE_BITSET_HPP
#define SEGPARSE_BITSET_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace segparse {

using word_t = std::uint64_t;

inline constexpr std::size_t word_bits = 64;

inline constexpr std::size_t words_for(std::size_t bits) noexcept
{
	return (bits + word_bits - 1) / word_bits;
}

// Fixed-width dynamic bitset over dense ids. Width never changes after construction.
class BitSet {
public:
	BitSet() = default;
	explicit BitSet(std::size_t bits) : bits_(bits), w_(words_for(bits), 0) {}

	static BitSet from_words(std::size_t bits, std::span<const word_t> words)
	{
		BitSet s(bits);
		for (std::size_t i = 0; i < s.w_.size() && i < words.size(); ++i)
			s.w_[i] = words[i];
		return s;
	}

	std::size_t size() const noexcept { return bits_; }
	std::size_t word_count() const noexcept { return w_.size(); }
	const word_t* data() const noexcept { return w_.data(); }
	word_t* data() noexcept { return w_.data(); }
	std::span<const word_t> words() const noexcept { return w_; }

	bool test(std::size_t i) const noexcept { return (w_[i / word_bits] >> (i % word_bits)) & 1u; }
	void set(std::size_t i) noexcept { w_[i / word_bits] |= word_t(1) << (i % word_bits); }
	void reset(std::size_t i) noexcept { w_[i / word_bits] &= ~(word_t(1) << (i % word_bits)); }
	void clear() noexcept { std::fill(w_.begin(), w_.end(), 0); }

	bool empty() const noexcept
	{
		for (word_t x : w_)
			if (x)
				return false;
		return true;
	}
	bool any() const noexcept { return !empty(); }

	std::size_t count() const noexcept
	{
		std::size_t c = 0;
		for (word_t x : w_)
			c += static_cast<std::size_t>(std::popcount(x));
		return c;
	}

	BitSet& operator|=(const BitSet& o) noexcept
	{
		for (std::size_t i = 0; i < w_.size(); ++i)
			w_[i] |= o.w_[i];
		return *this;
	}
	BitSet& operator&=(const BitSet& o) noexcept
	{
		for (std::size_t i = 0; i < w_.size(); ++i)
			w_[i] &= o.w_[i];
		return *this;
	}
	void or_words(const word_t* src) noexcept
	{
		for (std::size_t i = 0; i < w_.size(); ++i)
			w_[i] |= src[i];
	}

	bool intersects(const BitSet& o) const noexcept
	{
		for (std::size_t i = 0; i < w_.size(); ++i)
			if (w_[i] & o.w_[i])
				return true;
		return false;
	}
	bool subset_of(const BitSet& o) const noexcept
	{
		for (std::size_t i = 0; i < w_.size(); ++i)
			if (w_[i] & ~o.w_[i])
				return false;
		return true;
	}

	friend bool operator==(const BitSet& a, const BitSet& b) noexcept
	{
		return a.bits_ == b.bits_ && a.w_ == b.w_;
	}
	friend bool operator<(const BitSet& a, const BitSet& b) noexcept { return a.w_ < b.w_; }

	// Calls f(i) for every set bit in increasing order.
	template <class F>
	void for_each(F&& f) const
	{
		for (std::size_t k = 0; k < w_.size(); ++k) {
			word_t x = w_[k];
			while (x) {
				std::size_t b = static_cast<std::size_t>(std::countr_zero(x));
				f(k * word_bits + b);
				x &= x - 1;
			}
		}
	}

	std::vector<std::size_t> to_vector() const
	{
		std::vector<std::size_t> v;
		for_each([&](std::size_t i) { v.push_back(i); });
		return v;
	}

	// Renders as "{a,b,c}" with the given id offset (1 for human-facing ids).
	std::string str(std::size_t offset = 1) const
	{
		std::string s = "{";
		bool first = true;
		for_each([&](std::size_t i) {
			if (!first)
				s += ',';
			first = false;
			s += std::to_string(i + offset);
		});
		return s + "}";
	}

	std::size_t hash() const noexcept
	{
		std::uint64_t h = 0x9e3779b97f4a7c15ull ^ bits_;
		for (word_t x : w_) {
			h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
			h *= 0xff51afd7ed558ccdull;
		}
		return static_cast<std::size_t>(h ^ (h >> 33));
	}

private:
	std::size_t bits_ = 0;
	std::vector<word_t> w_;
};

// A set of parser states (segment ids).
using StateSet = BitSet;

struct BitSetHash {
	std::size_t operator()(const BitSet& s) const noexcept { return s.hash(); }
};

} // namespace segparse

#endif
