#pragma once

// Minimal worker-pool helper.  The cap is process-global: CLI flag --threads,
// else TORUSLAB_THREADS, else hardware concurrency.  Results must be written
// to caller-owned slots indexed by iteration so reductions stay deterministic
// regardless of scheduling.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace toruslab {

inline int& thread_cap_storage() {
    static int cap = 0; // 0 = not yet resolved
    return cap;
}

inline void set_thread_cap(int n) { thread_cap_storage() = std::max(1, n); }

inline int thread_cap() {
    int& cap = thread_cap_storage();
    if (cap == 0) {
        if (const char* env = std::getenv("TORUSLAB_THREADS"))
            cap = std::max(1, std::atoi(env));
        else
            cap = std::max(1u, std::thread::hardware_concurrency());
    }
    return cap;
}

// Runs fn(i) for i in [0, n) on up to thread_cap() workers.
inline void parallel_for(long long n, const std::function<void(long long)>& fn) {
    int workers = std::min<long long>(thread_cap(), n);
    if (workers <= 1) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (long long i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace toruslab
