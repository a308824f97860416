#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tcmdp {

//! 0 means "use the hardware concurrency".
inline unsigned resolve_jobs(unsigned jobs) {
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    return jobs;
}

//! Runs body(i) for i in [0, count). Each index must write only its own
//! output slot; results then do not depend on the number of workers.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& body) {
    jobs = resolve_jobs(jobs);
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace tcmdp
