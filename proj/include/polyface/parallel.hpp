#ifndef POLYFACE_PARALLEL_HPP
#define POLYFACE_PARALLEL_HPP

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace polyface {

/**
 * Resolve a worker count: an explicit positive hint wins, then the
 * POLYFACE_THREADS environment variable, then 1.  The thread count is a
 * scheduling hint only; every computation in this library writes
 * per-index results, so outputs do not depend on it.
 */
inline int resolve_thread_count(int hint = 0) {
    if (hint > 0) return hint;
    if (const char* env = std::getenv("POLYFACE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

/// Run fn(i) for i in [0, count) on `threads` workers (block partition).
/// The first exception raised by the lowest-numbered block is rethrown.
inline void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    threads = std::max(1, std::min<std::int64_t>(threads, count));
    if (threads == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::int64_t chunk = (count + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace polyface

#endif  // POLYFACE_PARALLEL_HPP
