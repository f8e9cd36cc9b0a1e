#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bcp {

/// Worker cap: BCP_THREADS when set and positive, else the hardware count.
unsigned default_threads();

/// Calls f(i) for i in [0, count) over contiguous blocks. Each index runs
/// exactly once, so results written per index do not depend on the number of
/// workers. The first exception thrown by any block is rethrown here. A
/// worker is only started for every `grain` indices.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f, std::size_t grain = 16) {
    const std::size_t workers = std::min<std::size_t>(
        std::max(1u, threads), std::max<std::size_t>(count / std::max<std::size_t>(grain, 1), 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    const std::size_t block = (count + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](std::size_t w) {
        try {
            const std::size_t end = std::min(count, (w + 1) * block);
            for (std::size_t i = w * block; i < end; ++i) f(i);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
        run(0);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace bcp
