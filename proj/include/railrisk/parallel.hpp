#pragma once
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace railrisk {

// Serial is the reference implementation every parallel kernel is tested
// against; OpenMP falls back to it when built without OpenMP support.
enum class ExecPolicy { Serial, OpenMP };

inline ExecPolicy default_policy() {
#ifdef _OPENMP
    return ExecPolicy::OpenMP;
#else
    return ExecPolicy::Serial;
#endif
}

inline bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

// Runs fn(i) for i in [0, n). Iterations must be independent; each writes
// disjoint outputs, so serial and parallel runs produce identical bits.
template <typename Fn>
void parallel_for(std::int64_t n, ExecPolicy policy, Fn&& fn) {
    if (policy == ExecPolicy::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
#endif
    }
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace railrisk
