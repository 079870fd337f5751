#pragma once

// Deterministic fork-join helper: results are always merged by index, so
// the output of a parallel run is identical to the serial one.

#include <algorithm>
#include <thread>
#include <vector>

namespace meanmat {

inline int default_jobs() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Invokes body(i) for i in [0, total); body must only write state owned by
// index i (typically a preallocated slot in a results vector).
template <class Body>
void parallel_for_index(long total, int jobs, Body&& body) {
    if (total <= 0) return;
    jobs = static_cast<int>(std::max<long>(1, std::min<long>(jobs, total)));
    if (jobs == 1) {
        for (long i = 0; i < total; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([w, jobs, total, &body] {
            for (long i = w; i < total; i += jobs) body(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace meanmat
