#pragma once

#include <cstddef>
#include <vector>

#include "imexp/dense.hpp"
#include "imexp/linear_operator.hpp"

namespace imexp {

/// Incremental Arnoldi process: modified Gram-Schmidt with one
/// re-orthogonalization pass. After j steps, A V_j = V_{j+1} Hbar_j, with
/// Hbar_j the (j+1) x j upper Hessenberg matrix.
class ArnoldiProcess {
 public:
  /// Relative size of h_{j+1,j} below which the subspace is taken as invariant.
  static constexpr double kBreakdownTol = 1e-13;

  ArnoldiProcess(const LinearOperator& a, std::size_t max_steps);

  /// Starts from v / ||v||; returns ||v||. Throws ArgumentError if v == 0.
  double start(std::span<const double> v);
  /// Performs one step; returns false (and does nothing) once broken down or
  /// when max_steps is reached.
  bool extend();

  std::size_t steps() const noexcept { return steps_; }
  bool breakdown() const noexcept { return breakdown_; }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  /// Entry h_{i,j} of the Hessenberg matrix (0-based).
  double h(std::size_t i, std::size_t j) const noexcept { return hess_(i, j); }
  /// Square leading block H_j (j x j).
  DenseMatrix square_hessenberg() const;
  /// Rectangular Hbar_j ((j+1) x j).
  DenseMatrix hessenberg() const;

 private:
  const LinearOperator& op_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
  bool breakdown_ = false;
  std::vector<Vector> basis_;
  DenseMatrix hess_;
};

struct ArnoldiResult {
  std::vector<Vector> basis;  ///< m+1 vectors, or m on breakdown
  DenseMatrix hessenberg;     ///< (m+1) x m
  std::size_t steps = 0;
  bool breakdown = false;     ///< span(basis) is A-invariant
};

ArnoldiResult arnoldi(const LinearOperator& a, std::span<const double> v, std::size_t m);

}  // namespace imexp
