#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tenspec::detail {

// Splits [0, n) into contiguous chunks, one per hardware thread, and returns
// body(begin, end) for each chunk in chunk order. Callers reduce with an
// order-independent operation (min, max) so results do not depend on the
// number of threads.
template <typename Result, typename Body>
std::vector<Result> parallel_chunks(std::size_t n, Body body) {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n / 64 + 1));
    std::vector<Result> results(workers);
    if (workers == 1) {
        results[0] = body(std::size_t{0}, n);
        return results;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                results[w] = body(n * w / workers, n * (w + 1) / workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace tenspec::detail
