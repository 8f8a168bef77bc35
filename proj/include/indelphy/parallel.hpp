#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace indelphy {

// Replicate- and pair-level parallelism. Callers write results into
// preallocated per-index slots, so serial and parallel execution produce
// bit-identical output; any reduction happens afterwards in index order.
// threads <= 1 runs the plain serial loop (the reference path).
template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
#ifdef _OPENMP
    if (threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#endif
    (void)threads;
    for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// 0 means "auto": use all hardware threads.
inline int resolve_threads(int requested) {
    return requested <= 0 ? hardware_threads() : requested;
}

}  // namespace indelphy
