#pragma once

// Minimal deterministic work partitioner. Results must not depend on the
// thread count, so callers write into preallocated per-item slots and seed any
// randomness per item, never per thread.

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dirout {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(0) .. fn(count-1), statically partitioned into contiguous blocks.
// The first exception thrown by any item is rethrown on the calling thread.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    const int t = resolve_threads(threads);
    if (t <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const auto workers = static_cast<std::size_t>(t);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::mutex err_mutex;
    std::exception_ptr first_error;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace dirout
