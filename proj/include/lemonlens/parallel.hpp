#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lemonlens {

enum class ExecPolicy { Serial, Parallel };

// Thread budget for Parallel kernels: OpenMP's max unless LEMONLENS_THREADS
// gives an explicit budget. Read per call so tests can toggle the variable at
// runtime. Always >= 1; silently clamped to 1024.
inline int resolve_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("LEMONLENS_THREADS")) {
    char* end = nullptr;
    const long budget = std::strtol(env, &end, 10);
    if (end != env && budget >= 1) n = static_cast<int>(budget > 1024 ? 1024 : budget);
  }
  return n < 1 ? 1 : n;
}

// Runs body(i) for i in [0,n). With ExecPolicy::Parallel the iterations are
// distributed statically over OpenMP threads; each iteration must write only
// to its own output slot, which makes serial and parallel runs bitwise
// identical. Exceptions thrown inside the parallel region are captured and
// the first one is rethrown after the join.
template <typename Body>
void parallel_for(ExecPolicy policy, std::size_t n, Body&& body) {
  if (n == 0) return;
#ifdef _OPENMP
  const int threads = resolve_threads();
  if (policy == ExecPolicy::Parallel && threads > 1 && n > 1) {
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(lemonlens_parallel_for_error)
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)policy;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace lemonlens
