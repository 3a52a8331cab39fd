#include "affine_smile/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

namespace affine_smile {

int worker_threads() {
    int threads = omp_get_max_threads();
    if (const char* env = std::getenv("AFFINE_SMILE_THREADS"); env != nullptr) {
        int cap = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
        if (ec == std::errc{} && cap > 0) threads = std::min(threads, cap);
    }
    return std::max(threads, 1);
}

}  // namespace affine_smile
