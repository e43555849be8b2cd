#include "imexp/laplacian.hpp"

#include <string>
#include <vector>

#include "imexp/errors.hpp"

namespace imexp {

double GridSpec::spacing() const noexcept {
  const double len = upper - lower;
  switch (bc) {
    case BoundaryCondition::dirichlet_homogeneous:
      return len / static_cast<double>(points_per_axis - 1);
    case BoundaryCondition::periodic:
    case BoundaryCondition::neumann_homogeneous:
      break;
  }
  return len / static_cast<double>(points_per_axis);
}

std::size_t GridSpec::unknowns() const noexcept {
  const std::size_t per_axis =
      bc == BoundaryCondition::dirichlet_homogeneous ? points_per_axis - 2 : points_per_axis;
  return dim == 1 ? per_axis : per_axis * per_axis;
}

double GridSpec::coordinate(std::size_t i) const noexcept {
  const double h = spacing();
  switch (bc) {
    case BoundaryCondition::dirichlet_homogeneous:
      return lower + static_cast<double>(i + 1) * h;
    case BoundaryCondition::periodic:
      return lower + static_cast<double>(i) * h;
    case BoundaryCondition::neumann_homogeneous:
      break;
  }
  return lower + (static_cast<double>(i) + 0.5) * h;
}

CsrMatrix build_laplacian_1d_dirichlet(const GridSpec& g) {
  if (g.dim != 1 || g.bc != BoundaryCondition::dirichlet_homogeneous) {
    throw ArgumentError("build_laplacian_1d_dirichlet: needs a 1D Dirichlet grid");
  }
  if (g.points_per_axis < 3) {
    throw ArgumentError("build_laplacian_1d_dirichlet: need at least 3 points, got " +
                        std::to_string(g.points_per_axis));
  }
  if (!(g.upper > g.lower)) throw ArgumentError("build_laplacian_1d_dirichlet: empty domain");
  const std::size_t n = g.unknowns();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) t.push_back({i, i - 1, inv_h2});
    t.push_back({i, i, -2.0 * inv_h2});
    if (i + 1 < n) t.push_back({i, i + 1, inv_h2});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

CsrMatrix build_laplacian_2d(const GridSpec& g) {
  if (g.dim != 2 || g.bc == BoundaryCondition::dirichlet_homogeneous) {
    throw ArgumentError("build_laplacian_2d: needs a 2D periodic or Neumann grid");
  }
  if (g.points_per_axis < 3) {
    throw ArgumentError("build_laplacian_2d: need at least 3 points per axis, got " +
                        std::to_string(g.points_per_axis));
  }
  if (!(g.upper > g.lower)) throw ArgumentError("build_laplacian_2d: empty domain");
  const std::size_t n = g.points_per_axis;
  const bool periodic = g.bc == BoundaryCondition::periodic;
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  const auto idx = [n](std::size_t i, std::size_t j) { return j * n + i; };

  std::vector<Triplet> t;
  t.reserve(5 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = idx(i, j);
      double diag = 0.0;
      // A neighbour across a Neumann face is the mirror ghost, which equals
      // the centre value, so it cancels against the diagonal.
      const auto neighbour = [&](bool inside, std::size_t col) {
        if (inside || periodic) {
          t.push_back({row, col, inv_h2});
          diag -= inv_h2;
        }
      };
      neighbour(i > 0, idx(i > 0 ? i - 1 : n - 1, j));
      neighbour(i + 1 < n, idx(i + 1 < n ? i + 1 : 0, j));
      neighbour(j > 0, idx(i, j > 0 ? j - 1 : n - 1));
      neighbour(j + 1 < n, idx(i, j + 1 < n ? j + 1 : 0));
      t.push_back({row, row, diag});
    }
  }
  return CsrMatrix::from_triplets(n * n, n * n, std::move(t));
}

}  // namespace imexp
