#ifndef SEGPARSE_POOL_HPP
#define SEGPARSE_POOL_HPP

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace segparse {

// Fixed set of threads that drain one batch of indexed tasks at a time. Tasks are handed
// out in index order from a shared counter; run() returns once every task has finished.
// The calling thread works too, so a pool of size 1 runs everything inline.
class WorkerPool {
public:
	explicit WorkerPool(std::size_t workers = 0);
	~WorkerPool();
	WorkerPool(const WorkerPool&) = delete;
	WorkerPool& operator=(const WorkerPool&) = delete;

	std::size_t size() const noexcept { return threads_.size() + 1; }
	void run(std::size_t count, const std::function<void(std::size_t)>& task);

private:
	void loop();
	void drain(const std::function<void(std::size_t)>& task, std::size_t count);

	std::vector<std::thread> threads_;
	std::mutex mu_;
	std::condition_variable wake_;
	std::condition_variable done_;
	const std::function<void(std::size_t)>* task_ = nullptr;
	std::size_t count_ = 0;
	std::atomic<std::size_t> next_{0};
	std::size_t busy_ = 0;
	std::size_t generation_ = 0;
	bool stop_ = false;
	std::exception_ptr failure_;
};

} // namespace segparse

#endif
