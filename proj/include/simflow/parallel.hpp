#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace simflow {

// Thread count from SIMFLOW_THREADS (default 1). Work items are independent
// and written by index, so results do not depend on the thread count.
inline int thread_count() {
    if (const char* env = std::getenv("SIMFLOW_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const int nt = std::min(thread_count(), n > 0 ? n : 1);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace simflow
