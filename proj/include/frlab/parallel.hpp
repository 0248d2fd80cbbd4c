#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace frlab {

/// Execution mode for data-parallel kernels. Serial is the reference path;
/// parallel must produce identical results (kernels write disjoint slots only).
enum class Exec { serial, parallel };

template <class F>
void for_each_index(std::ptrdiff_t n, Exec exec, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
        return;
    }
#else
    (void)exec;
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace frlab
