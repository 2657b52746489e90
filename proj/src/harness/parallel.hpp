#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace ipwmc::harness::detail {

// Calls fn(r) for r in [0, count) on up to `workers` threads. Worker w takes
// r = w, w + workers, ...; callers write into slot r so the gathered output
// does not depend on scheduling. The first exception (lowest worker) is
// rethrown after all threads join.
template <class Fn>
void for_each_index(std::uint64_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t r = 0; r < count; ++r) fn(r);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
    std::vector<std::exception_ptr> errors(used);
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t r = w; r < count; r += used) fn(r);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace ipwmc::harness::detail
