#pragma once

#include <atomic>
#include <complex>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace blform {

/// Worker cap: BLFORM_THREADS when set, hardware concurrency otherwise.
inline unsigned max_threads() {
    if (const char* env = std::getenv("BLFORM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

/// Evaluates term(i) for i in [0, n) and sums the results in index order.
/// Work items are handed to threads one at a time through an atomic counter,
/// but every partial lands in its own slot, so the reduction order (and the
/// result, bit for bit) is independent of the schedule and thread count.
inline std::complex<double> indexed_sum(size_t n,
                                        const std::function<std::complex<double>(size_t)>& term) {
    std::vector<std::complex<double>> partials(n);
    unsigned workers = std::min<size_t>(max_threads(), n);
    if (workers <= 1 || n < 4) {
        for (size_t i = 0; i < n; ++i) partials[i] = term(i);
    } else {
        std::atomic<size_t> next{0};
        auto run = [&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) return;
                partials[i] = term(i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    std::complex<double> acc(0.0, 0.0);
    for (const auto& p : partials) acc += p;
    return acc;
}

} // namespace blform
