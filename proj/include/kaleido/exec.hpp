#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace kaleido::exec {

inline std::atomic<int>& thread_count_ref() {
    static std::atomic<int> count{1};
    return count;
}

inline int thread_count() { return thread_count_ref().load(); }

inline void set_thread_count(int n) { thread_count_ref().store(n < 1 ? 1 : n); }

/// Applies `fn` to every index in [0, n) and returns the results indexed by
/// input position, so the output is identical for any worker count.
template <typename Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{0}))> {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out(n);
    int workers = thread_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    std::size_t spawn = static_cast<std::size_t>(workers) < n ? static_cast<std::size_t>(workers) : n;
    for (std::size_t w = 0; w + 1 < spawn; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace kaleido::exec
