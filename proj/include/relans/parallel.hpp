#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace relans {

// Worker cap: RELANS_THREADS when set, hardware concurrency otherwise.
inline unsigned worker_count() {
    if (const char* env = std::getenv("RELANS_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs f(begin, end) over disjoint chunks of [0, n). Workers must only write
// to disjoint state; results are deterministic as long as f is.
template <typename F>
void parallel_chunks(std::size_t n, F&& f) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n ? n : 1);
    if (workers <= 1 || n < 2) {
        f(static_cast<std::size_t>(0), n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&f, begin, end] { f(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace relans
