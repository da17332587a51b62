#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <utility>
#include <vector>

namespace scx {

enum class ExecPolicy { Serial, Parallel };

/// Serial reference: out[i] = fn(i) for i in [0, n).
template <class Fn>
auto map_indexed_serial(std::size_t n, const Fn& fn) -> std::vector<decltype(fn(std::size_t{0}))> {
    using T = decltype(fn(std::size_t{0}));
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
}

/// OpenMP kernel with slot-per-index writes, so the result is independent of
/// thread count and identical to the serial reference. The first exception
/// thrown by any point is re-raised after the loop.
template <class Fn>
auto map_indexed_parallel(std::size_t n, const Fn& fn) -> std::vector<decltype(fn(std::size_t{0}))> {
    using T = decltype(fn(std::size_t{0}));
    std::vector<std::optional<T>> slots(n);
    std::exception_ptr first_error = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        try {
            slots[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(scx_map_indexed_error)
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

template <class Fn>
auto map_indexed(std::size_t n, const Fn& fn, ExecPolicy policy)
    -> std::vector<decltype(fn(std::size_t{0}))> {
    return policy == ExecPolicy::Parallel ? map_indexed_parallel(n, fn)
                                          : map_indexed_serial(n, fn);
}

}  // namespace scx
