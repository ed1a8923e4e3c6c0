#pragma once

#include <cstddef>
#include <exception>

namespace wingvol::detail {

/// Runs body(i) for i in [0, n) across OpenMP threads. An exception thrown by
/// any iteration is rethrown on the calling thread after the loop.
template <class Body>
void parallel_for(std::size_t n, const Body& body) {
    std::exception_ptr failure;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(wingvol_parallel_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace wingvol::detail
