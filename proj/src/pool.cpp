#include "segparse/pool.hpp"

#include <algorithm>

namespace segparse {

WorkerPool::WorkerPool(std::size_t workers)
{
	if (workers == 0)
		workers = std::max(1u, std::thread::hardware_concurrency());
	threads_.reserve(workers - 1);
	for (std::size_t i = 1; i < workers; ++i)
		threads_.emplace_back([this] { loop(); });
}

WorkerPool::~WorkerPool()
{
	{
		std::lock_guard lk(mu_);
		stop_ = true;
	}
	wake_.notify_all();
	for (auto& t : threads_)
		t.join();
}

void WorkerPool::drain(const std::function<void(std::size_t)>& task, std::size_t count)
{
	for (;;) {
		std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
		if (i >= count)
			return;
		try {
			task(i);
		} catch (...) {
			std::lock_guard lk(mu_);
			if (!failure_)
				failure_ = std::current_exception();
		}
	}
}

void WorkerPool::loop()
{
	std::size_t seen = 0;
	for (;;) {
		const std::function<void(std::size_t)>* task = nullptr;
		std::size_t count = 0;
		{
			std::unique_lock lk(mu_);
			wake_.wait(lk, [&] { return stop_ || generation_ != seen; });
			if (stop_)
				return;
			seen = generation_;
			// A batch that already finished leaves count_ at zero.
			if (count_ == 0)
				continue;
			task = task_;
			count = count_;
			++busy_;
		}
		drain(*task, count);
		{
			std::lock_guard lk(mu_);
			--busy_;
		}
		done_.notify_all();
	}
}

void WorkerPool::run(std::size_t count, const std::function<void(std::size_t)>& task)
{
	if (count == 0)
		return;
	if (threads_.empty() || count == 1) {
		for (std::size_t i = 0; i < count; ++i)
			task(i);
		return;
	}
	{
		std::lock_guard lk(mu_);
		task_ = &task;
		count_ = count;
		next_.store(0, std::memory_order_relaxed);
		failure_ = nullptr;
		++generation_;
	}
	wake_.notify_all();
	drain(task, count);
	std::exception_ptr err;
	{
		std::unique_lock lk(mu_);
		done_.wait(lk, [&] { return busy_ == 0; });
		task_ = nullptr;
		count_ = 0;
		err = failure_;
	}
	if (err)
		std::rethrow_exception(err);
}

} // namespace segparse
