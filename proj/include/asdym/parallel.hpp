#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace asdym {

/// Number of worker threads used by parallel_for; 0 means hardware concurrency.
inline std::size_t& worker_count()
{
    static std::size_t n = 0;
    return n;
}

/// Calls f(i) for i in [0, n) on a bounded pool of threads. f must only write
/// to per-index storage. The first exception thrown is rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, F&& f)
{
    std::size_t workers = worker_count() ? worker_count() : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min({workers, n, std::size_t{16}});
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace asdym
