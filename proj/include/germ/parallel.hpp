#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace germ {

inline bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

inline int hardware_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Run fn(0..count-1). jobs <= 1 is the serial reference path; anything
/// larger fans out over OpenMP threads. fn must not throw (store errors
/// in per-index slots) and must write only to its own index, which keeps
/// results identical across schedules and thread counts.
template <typename Fn>
void for_each_index(int count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 4)
    for (int i = 0; i < count; ++i) fn(i);
#else
    for (int i = 0; i < count; ++i) fn(i);
#endif
}

}  // namespace germ
