#pragma once

#include <cstdlib>
#include <cstring>

#ifdef SOILC_HAVE_OPENMP
#include <omp.h>
#endif

namespace soilc {

// Execution policy for the data-parallel kernels (particle propagation and
// weighting). Serial is the reference path; OpenMP must produce bit-identical
// results because every loop body writes only its own slot and reductions are
// performed in fixed order outside the parallel region.
enum class Exec { Serial, OpenMP };

inline int hardware_workers() {
#ifdef SOILC_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Worker count resolution: explicit argument wins, then SOILC_THREADS, then
// the OpenMP default. A count of 0 or 1 means serial.
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SOILC_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return hardware_workers();
}

template <typename Body>
void parallel_for(Exec exec, long n, Body&& body) {
#ifdef SOILC_HAVE_OPENMP
    if (exec == Exec::OpenMP && n > 1) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
#endif
    (void)exec;
    for (long i = 0; i < n; ++i) body(i);
}

}  // namespace soilc
