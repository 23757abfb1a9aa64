#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mottbox {

// Splits [0, count) into at most `threads` contiguous chunks and runs
// body(begin, end) on each, one std::thread per chunk. threads == 0 means
// std::thread::hardware_concurrency(). The chunking depends only on
// (count, threads); callers that write results per index or reduce chunk
// results in chunk order get output independent of scheduling. The first
// exception thrown by any chunk is rethrown on the calling thread.
inline void parallel_chunks(std::size_t count, unsigned threads,
                            const std::function<void(std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_chunks = std::min<std::size_t>(threads, count);
    if (n_chunks == 1) {
        body(0, count);
        return;
    }
    std::vector<std::exception_ptr> errors(n_chunks);
    std::vector<std::thread> workers;
    workers.reserve(n_chunks);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const std::size_t begin = count * c / n_chunks;
        const std::size_t end = count * (c + 1) / n_chunks;
        workers.emplace_back([&, c, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace mottbox
