#pragma once

#include <cstddef>
#include <memory>

#include "imexp/ichol.hpp"
#include "imexp/linear_operator.hpp"

namespace imexp {

enum class PreconditionerSide {
  left,   ///< minimize ||M^{-1}(b - A x)||
  split,  ///< solve L^{-1} A L^{-T} y = L^{-1} b, x = L^{-T} y (SPD systems)
};

struct GmresConfig {
  double tol = 1e-12;
  std::size_t restart = 10;
  std::size_t max_iters = 500;
  std::shared_ptr<const IcFactor> preconditioner;
  PreconditionerSide side = PreconditionerSide::left;
};

struct GmresResult {
  Vector x;
  std::size_t iterations = 0;
  bool converged = false;
  /// Final relative residual in the norm being minimized.
  double relative_residual = 0.0;
};

/// Restarted GMRES(restart). Converged when the residual being minimized
/// (preconditioned for left preconditioning) is at most tol times the same
/// norm of the right-hand side. Throws ConvergenceError with the best
/// iterate on max_iters or when a whole cycle makes no progress.
GmresResult gmres_solve(const LinearOperator& a, std::span<const double> b,
                        std::span<const double> x0, const GmresConfig& cfg);

}  // namespace imexp
