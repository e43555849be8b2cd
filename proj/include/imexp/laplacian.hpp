#pragma once

#include <cstddef>

#include "imexp/sparse_matrix.hpp"

namespace imexp {

enum class BoundaryCondition { dirichlet_homogeneous, periodic, neumann_homogeneous };

/// Uniform grid description.
///
///  - Dirichlet: node-centered, points_per_axis nodes including both
///    endpoints; only the interior nodes are unknowns.
///  - Periodic: points_per_axis distinct cells, no duplicated endpoint.
///  - Neumann: cell-centered, points_per_axis cells; the mirror ghost sits
///    across the boundary face so the operator stays symmetric.
struct GridSpec {
  int dim = 1;
  std::size_t points_per_axis = 0;
  double lower = 0.0;
  double upper = 1.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet_homogeneous;

  double spacing() const noexcept;
  /// Number of unknowns: interior nodes only for Dirichlet.
  std::size_t unknowns() const noexcept;
  /// Coordinate of the i-th unknown along an axis.
  double coordinate(std::size_t i) const noexcept;
};

/// (1, -2, 1) / h^2 over the interior nodes of a 1D Dirichlet grid.
CsrMatrix build_laplacian_1d_dirichlet(const GridSpec& g);

/// 5-point Laplacian on a 2D periodic or homogeneous-Neumann grid.
/// Unknown (i, j) with i along x is stored at index j * n + i. Both regimes
/// give a symmetric matrix with zero row sums.
CsrMatrix build_laplacian_2d(const GridSpec& g);

}  // namespace imexp
