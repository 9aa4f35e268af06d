#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace dge {

// Worker cap: DGE_WORKERS when set, hardware concurrency otherwise.
inline unsigned worker_count() {
    if (const char* env = std::getenv("DGE_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n). Results must be written to index-addressed
// slots by the caller, which keeps assembly order-deterministic regardless
// of scheduling. The first exception is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

}  // namespace dge
