#pragma once

// Minimal deterministic parallel-for: indices are partitioned into contiguous
// blocks, one per worker, so every index is visited exactly once and results
// land in caller-preallocated slots regardless of thread count.

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace drumeig {

inline int& thread_count_ref() {
    static int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return n;
}

inline void set_thread_count(int n) { thread_count_ref() = std::max(1, n); }
inline int thread_count() { return thread_count_ref(); }

namespace detail {
// Depth marker so a parallel_for running inside a worker stays serial instead
// of oversubscribing.
inline thread_local int parallel_depth = 0;
} // namespace detail

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    if (n <= 0) return;
    const int workers = detail::parallel_depth > 0 ? 1 : std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi]() {
            detail::parallel_depth = 1;
            try {
                for (int i = lo; i < hi; ++i) {
                    if (failed.load(std::memory_order_relaxed)) return;
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace drumeig
