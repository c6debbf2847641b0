#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ptchain::detail {

// Runs body(i) for i in [0, count) on a small worker pool. Results must be
// written to per-index slots; the first exception (by index) is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(count, hw);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

} // namespace ptchain::detail
