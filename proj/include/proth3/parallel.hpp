/* parallel.hpp -- ordered-commit worker pool */

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace proth3 {

/// 0 means "use hardware parallelism"; never returns 0.
inline unsigned effective_threads(unsigned requested) {
    if (requested != 0)
        return requested;
    const unsigned hardware = std::thread::hardware_concurrency();
    return hardware == 0 ? 1 : hardware;
}

/// Evaluate compute(i) for i in [0, count) on a pool of workers, calling
/// commit(i, result) strictly in ascending i. Workers run out of order;
/// whichever completes the frontier drains it. commit returning false
/// stops the run early (pending results are dropped, as after a kill).
template <typename T>
void parallel_map_ordered(uint64_t count, unsigned threads,
                          const std::function<T(uint64_t)>& compute,
                          const std::function<bool(uint64_t, T&&)>& commit) {
    if (count == 0)
        return;
    unsigned nthreads = effective_threads(threads);
    if (nthreads > count)
        nthreads = static_cast<unsigned>(count);

    std::atomic<uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mutex;
    std::map<uint64_t, T> pending;
    uint64_t frontier = 0;
    std::exception_ptr error;

    auto worker = [&]() {
        for (;;) {
            if (stop.load(std::memory_order_relaxed))
                return;
            const uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count)
                return;
            T result;
            try {
                result = compute(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (!error)
                    error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                return;
            }
            std::lock_guard<std::mutex> lock(mutex);
            if (stop.load(std::memory_order_relaxed))
                return;
            pending.emplace(i, std::move(result));
            while (!pending.empty() && pending.begin()->first == frontier) {
                auto node = pending.extract(pending.begin());
                bool keep_going = false;
                try {
                    keep_going = commit(frontier, std::move(node.mapped()));
                } catch (...) {
                    if (!error)
                        error = std::current_exception();
                    stop.store(true, std::memory_order_relaxed);
                    return;
                }
                ++frontier;
                if (!keep_going) {
                    stop.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        }
    };

    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace proth3
