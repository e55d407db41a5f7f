#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mtp {

/// Worker count from MTP_THREADS, default 1.
inline int worker_count() {
    if (const char* env = std::getenv("MTP_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

/// Chunked f(i) over [0, n). Iterations must be independent; chunk boundaries
/// are deterministic for a fixed worker count.
template <typename F>
void parallel_for(int n, F&& f) {
    int workers = worker_count();
    if (workers <= 1 || n < 2 * workers) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int lo = w * chunk;
        int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (int i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace mtp
