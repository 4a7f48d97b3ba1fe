#ifndef DDMM_PARALLEL_HPP
#define DDMM_PARALLEL_HPP

#include <cstdint>

namespace ddmm::par {

/// Worker cap for the OpenMP kernels. 0 means "use all available threads";
/// 1 selects the serial reference path. Results are required to be
/// bit-identical for any setting, which the test suite asserts.
int max_threads();
void set_max_threads(int t);

bool serial();

/// Runs f(i) for i in [0, count). Parallel across OpenMP threads unless the
/// serial path is selected. Bodies must only write to disjoint slots.
template <class F>
void parallel_for(std::int64_t count, F&& f);

}  // namespace ddmm::par

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ddmm::par {

template <class F>
void parallel_for(std::int64_t count, F&& f) {
#ifdef _OPENMP
  if (!serial()) {
    const int cap = max_threads();
#pragma omp parallel for schedule(static) num_threads(cap > 0 ? cap : omp_get_max_threads())
    for (std::int64_t i = 0; i < count; ++i) f(i);
    return;
  }
#endif
  for (std::int64_t i = 0; i < count; ++i) f(i);
}

}  // namespace ddmm::par

#endif
