#pragma once

#include <cstdint>

namespace imexp {

/// Machine-independent work tallies. Each thread owns one instance, so
/// concurrent integration runs on different threads never share counts.
struct WorkCounters {
  std::uint64_t spmv = 0;
  std::uint64_t gmres_iters = 0;
  std::uint64_t krylov_matvecs = 0;
  std::uint64_t n_evals = 0;
  std::uint64_t jv_evals = 0;

  WorkCounters& operator+=(const WorkCounters& o) {
    spmv += o.spmv;
    gmres_iters += o.gmres_iters;
    krylov_matvecs += o.krylov_matvecs;
    n_evals += o.n_evals;
    jv_evals += o.jv_evals;
    return *this;
  }
  friend WorkCounters operator-(WorkCounters a, const WorkCounters& b) {
    a.spmv -= b.spmv;
    a.gmres_iters -= b.gmres_iters;
    a.krylov_matvecs -= b.krylov_matvecs;
    a.n_evals -= b.n_evals;
    a.jv_evals -= b.jv_evals;
    return a;
  }
  friend bool operator==(const WorkCounters&, const WorkCounters&) = default;
};

/// Counters of the calling thread.
WorkCounters& thread_counters() noexcept;

}  // namespace imexp
