#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace wntest::detail {

// Runs body(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots; the reduction is left to the caller so that it
// happens in index order. The first failure (lowest failing index observed)
// is rethrown after all workers stop, as failure_handler(index, eptr).
template <class Body, class OnFailure>
void parallel_for(std::size_t count, unsigned threads, Body&& body, OnFailure&& on_failure) {
    constexpr std::size_t kChunk = 16;
    threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mutex;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= count) return;
            const std::size_t end = std::min(count, begin + kChunk);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mutex);
                    if (i < failed_index) {
                        failed_index = i;
                        failure = std::current_exception();
                    }
                    failed = true;
                    return;
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) on_failure(failed_index, failure);
}

template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    parallel_for(count, threads, std::forward<Body>(body),
                 [](std::size_t, std::exception_ptr e) { std::rethrow_exception(e); });
}

}  // namespace wntest::detail
