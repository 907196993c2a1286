#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace abatement {

/// Run fn(k) for k in [0, n) on up to `threads` workers. fn must not throw;
/// callers record per-index results so output order never depends on timing.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace abatement
