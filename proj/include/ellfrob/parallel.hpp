#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace ellfrob {

inline int default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// f(0..n-1) on at most `workers` threads; results keep index order. The first exception by
// index is rethrown after all workers finish.
template <class F>
auto parallel_map(std::size_t n, int workers, F f) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t k = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < k; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

} // namespace ellfrob
