#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sswm {

// Worker count: hardware concurrency unless SSWM_THREADS overrides it.
inline int thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    int n = hw ? int(hw) : 1;
    if (const char* env = std::getenv("SSWM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) n = int(std::min<long>(v, 256));
    }
    return std::max(1, n);
}

// Static block split of [begin, end). Every index is written by exactly one
// worker and reductions happen elsewhere in fixed serial order, so results
// are bit-identical for any thread count.
template <class F>
inline void parallel_for(std::size_t begin, std::size_t end, F&& f, int threads = 0) {
    if (threads <= 0) threads = thread_count();
    const std::size_t total = end > begin ? end - begin : 0;
    if (total == 0) return;
    const std::size_t nt = std::min<std::size_t>(std::size_t(threads), total);
    if (nt <= 1) {
        for (std::size_t i = begin; i < end; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (total + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t lo = begin + t * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&f, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

}
