#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace nakasec::detail {

inline unsigned resolve_threads(unsigned threads, std::uint64_t trials) {
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (threads > trials) threads = static_cast<unsigned>(trials);
    return threads;
}

// Runs fn(begin, end) over a partition of [0, trials) and folds the returned
// accumulators with operator+=. Results do not depend on the partition as
// long as fn derives all randomness from the trial index alone.
template <typename Acc, typename Fn>
Acc run_partitioned(std::uint64_t trials, unsigned threads, const Fn& fn) {
    threads = resolve_threads(threads, trials);
    if (threads <= 1) return fn(std::uint64_t{0}, trials);

    std::vector<Acc> parts(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = trials / threads;
    const std::uint64_t remainder = trials % threads;
    std::uint64_t begin = 0;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t end = begin + chunk + (t < remainder ? 1 : 0);
        pool.emplace_back([&parts, &fn, t, begin, end] { parts[t] = fn(begin, end); });
        begin = end;
    }
    for (auto& worker : pool) worker.join();

    Acc total{};
    for (const auto& part : parts) total += part;
    return total;
}

} // namespace nakasec::detail
