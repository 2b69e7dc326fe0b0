#pragma once

#include <cstdint>
#include <exception>
#include <mutex>

namespace hicrit {

/// Worker cap used by every OpenMP region in the library. Values < 1 reset
/// to the OpenMP default.
void set_num_threads(int threads);
int num_threads();

/// Reads HICRIT_THREADS; returns 0 when unset or unparsable.
int threads_from_env();

/// Static-schedule OpenMP loop over [0, count). The first exception thrown
/// by any iteration is rethrown on the calling thread.
template <class Body>
void parallel_for(std::int64_t count, Body&& body, bool enabled = true) {
    std::exception_ptr failure;
    std::mutex guard;
#pragma omp parallel for schedule(static) num_threads(num_threads()) if (enabled)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

/// Same as parallel_for with a dynamic schedule for uneven iterations.
template <class Body>
void parallel_for_dynamic(std::int64_t count, Body&& body, bool enabled = true) {
    std::exception_ptr failure;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads()) if (enabled)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace hicrit
