#pragma once

#if defined(UHLAB_OPENMP)
#include <omp.h>
#endif

namespace uhlab {

inline int max_jobs() {
#if defined(UHLAB_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_jobs(int n) {
#if defined(UHLAB_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Parallel loop over [0, n). Bodies must write disjoint slots; any reduction
// is done by the caller as a serial fold over the filled buffer, so results
// do not depend on the thread count.
template <class F>
void parallel_for(int n, F&& body) {
#if defined(UHLAB_OPENMP)
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) body(i);
#else
  for (int i = 0; i < n; ++i) body(i);
#endif
}

} // namespace uhlab
