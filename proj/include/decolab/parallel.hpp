// parallel.hpp: deterministic fork-join loop over an index range. The thread
// budget comes from DECOLAB_THREADS (falling back to the hardware count); a
// body that only writes state owned by its own index produces results
// independent of that budget.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace decolab {

inline std::size_t thread_budget() {
    if (const char* env = std::getenv("DECOLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Contiguous chunks, one worker per chunk. Bodies must not throw.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t n_threads = 0) {
    if (n == 0) return;
    std::size_t workers = n_threads ? n_threads : thread_budget();
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace decolab
