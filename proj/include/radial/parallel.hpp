#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace radial::par {

// Reductions below always associate in fixed chunk order, so results are
// bit-identical for any thread count (and to a single-threaded run).
inline constexpr std::size_t kChunk = 4096;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Caps OpenMP team size for the calling thread (per-thread ICV); sweep
/// workers use this to avoid oversubscription.
inline void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n > 0 ? n : 1);
#else
  (void)n;
#endif
}

/// sum_{i=0}^{n-1} f(i), chunked.
template <typename F>
double sum(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  if (n_chunks == 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += f(i);
    return acc;
  }
  std::vector<double> partial(n_chunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long c = 0; c < static_cast<long long>(n_chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// Element-wise parallel loop; safe when iterations touch disjoint state.
template <typename F>
void for_each(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    f(static_cast<std::size_t>(i));
  }
}

}  // namespace radial::par
