#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace affine_smile {

/// Worker threads for the OpenMP kernels: the OpenMP default, capped by the
/// AFFINE_SMILE_THREADS environment variable when it holds a positive integer.
int worker_threads();

/// Runs fn(i) for i in [0, n) across worker_threads(). The first exception
/// thrown by any iteration is rethrown on the calling thread after the loop.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::exception_ptr failure;
    std::mutex guard;
    const auto count = static_cast<long long>(n);
    const int threads = worker_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace affine_smile
