#pragma once

#include <cstddef>
#include <vector>

#include "imexp/linear_operator.hpp"
#include "imexp/vector_ops.hpp"

namespace imexp {

struct KrylovConfig {
  double tol = 1e-12;
  std::size_t max_basis = 100;
  std::size_t max_substeps = 64;
};

struct KrylovOutcome {
  Vector result;
  /// Arnoldi steps taken in each accepted substep.
  std::vector<std::size_t> basis_sizes;
  /// Operator applications; equals the sum of basis_sizes.
  std::size_t total_matvecs = 0;
  bool converged = false;
};

/// Adaptive Krylov approximation of phi_k(tau A) v.
///
/// Writes phi_k(tau A) v as the value at s = 1 of the solution of a linear
/// ODE driven by polynomial forcing, and advances that ODE in substeps. Each
/// substep is one exponential of an (n+k)-dimensional augmented operator,
/// evaluated on an Arnoldi basis that grows until the a-posteriori residual
/// estimate beta * s * h_{m+1,m} |e_m^T phi_1(s H_m) e_1| falls below
/// tol * s * ||v||. If the basis reaches max_basis first, the substep is
/// shortened and the estimate re-checked on the same basis.
///
/// Throws ConvergenceError (best iterate attached) if more than
/// max_substeps substeps would be needed.
KrylovOutcome phi_times_vector(const LinearOperator& a, int k, std::span<const double> v,
                               double tau, const KrylovConfig& cfg = {});

}  // namespace imexp
