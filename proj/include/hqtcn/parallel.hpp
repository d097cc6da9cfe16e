#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace hqtcn {

// Runs fn(begin, end, worker) over contiguous chunks of [0, n). Callers store
// per-index results and reduce in index order afterwards, so outputs do not
// depend on the thread count.
inline void parallel_for(int n, int threads,
                         const std::function<void(int, int, int)>& fn) {
    if (n <= 0) return;
    if (threads < 1) threads = 1;
    if (threads > n) threads = n;
    if (threads == 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
    }
    for (std::thread& t : pool) t.join();
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace hqtcn
