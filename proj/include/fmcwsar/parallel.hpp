#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fmcwsar {

/// Degree of parallelism for data-parallel loops. 0 selects hardware concurrency.
struct Execution {
    unsigned threads = 1;

    unsigned resolved() const {
        if (threads != 0) return threads;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
};

/// Runs body(begin, end) over contiguous, disjoint chunks of [0, n). Each index is
/// visited by exactly one worker, so per-index results never depend on the thread count.
template <typename Body>
void parallel_for(std::size_t n, Execution exec, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(exec.resolved(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace fmcwsar
