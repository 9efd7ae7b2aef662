#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace webmap::detail {

struct Chunk {
    std::size_t index;
    std::size_t begin;
    std::size_t end;
};

/// Splits [0, count) into at most `threads` contiguous chunks. The split depends
/// only on (count, threads), so callers merging per-chunk results in index
/// order get a fixed reduction order.
inline std::vector<Chunk> split(std::size_t count, unsigned threads) {
    const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
    std::vector<Chunk> chunks;
    chunks.reserve(parts);
    for (std::size_t i = 0; i < parts; ++i) {
        chunks.push_back({i, count * i / parts, count * (i + 1) / parts});
    }
    return chunks;
}

/// Runs body(chunk) for every chunk, one thread per chunk, rethrowing the first
/// exception after all threads join.
template <class Body>
void run_chunks(const std::vector<Chunk>& chunks, Body&& body) {
    if (chunks.size() <= 1) {
        for (const auto& c : chunks) body(c);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(chunks.size());
        for (const auto& c : chunks) {
            workers.emplace_back([&, c] {
                try {
                    body(c);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace webmap::detail
