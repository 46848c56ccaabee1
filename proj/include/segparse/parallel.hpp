#ifndef SEGPARSE_PARALLEL_HPP
#define SEGPARSE_PARALLEL_HPP

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "segparse/automata.hpp"
#include "segparse/pool.hpp"
#include "segparse/serial.hpp"

namespace segparse {

using Range = std::pair<std::size_t, std::size_t>; // [first, second)

// Chunks of length ceil(n/c), the last one possibly shorter, each cut into up to f
// fragments by the same rule. The fragments are the pool's work items.
struct ChunkPlan {
	std::size_t length = 0;
	std::size_t fragments_per_chunk = 4;
	std::vector<Range> chunks;
	std::vector<Range> fragments;

	std::size_t count() const noexcept { return chunks.size(); }
};

ChunkPlan plan_chunks(std::size_t n, std::size_t c, std::size_t f = 4);

// fw[i * l + j]: segments reached from entry j over chunk i; bw likewise over the reversed
// chunk with the reverse machine.
struct ReachArrays {
	std::size_t chunks = 0;
	std::size_t segments = 0;
	std::vector<StateSet> fw;
	std::vector<StateSet> bw;

	const StateSet& forward(std::size_t i, std::size_t j) const { return fw[i * segments + j]; }
	const StateSet& backward(std::size_t i, std::size_t j) const { return bw[i * segments + j]; }
};

// Every entry of every chunk, run by run.
ReachArrays reach(const Grammar& g, const std::vector<Range>& units, std::string_view text,
                  WorkerPool* pool = nullptr);

// fw[i] = J_i for i = 0..c, bw[i] = Ĵ_i for i = 1..c+1 (bw[0] unused).
struct JoinColumns {
	std::vector<StateSet> fw;
	std::vector<StateSet> bw;
};

JoinColumns join(const ReachArrays& r, const StateSet& initial, const StateSet& final);

// Forward DFA pass of each unit from fw[u], then the reverse DFA pass from bw[u + 2]
// intersecting in place. Column 0 becomes I ∩ (backward set at 0). The joins must accept.
void build_and_merge(const Grammar& g, const std::vector<Range>& units, const JoinColumns& j,
                     std::string_view text, Slpf& out, WorkerPool* pool = nullptr);

struct ParallelOptions {
	std::size_t chunks = 0;     // 0: one per worker
	std::size_t workers = 0;    // 0: hardware threads; ignored when a pool is passed
	std::size_t fragments = 4;
};

ParseResult parse_parallel(const Grammar& g, std::string_view text, const ParallelOptions& opt = {},
                           WorkerPool* pool = nullptr);
bool recognize_parallel(const Grammar& g, std::string_view text, const ParallelOptions& opt = {},
                        WorkerPool* pool = nullptr);

} // namespace segparse

#endif
