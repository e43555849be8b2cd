#include "imexp/gmres.hpp"

#include <cmath>
#include <string>

#include "imexp/arnoldi.hpp"
#include "imexp/errors.hpp"
#include "imexp/work_counters.hpp"

namespace imexp {

namespace {

struct CoreResult {
  Vector x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

// Unpreconditioned restarted GMRES on (op, rhs); preconditioning is applied
// by the caller through op and rhs.
CoreResult gmres_core(const LinearOperator& op, std::span<const double> rhs,
                      std::span<const double> x0, const GmresConfig& cfg) {
  const std::size_t n = op.size();
  CoreResult res;
  res.x.assign(x0.begin(), x0.end());
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    res.x.assign(n, 0.0);
    return res;
  }
  const double target = cfg.tol * bnorm;

  ArnoldiProcess proc(op, cfg.restart);
  Vector r(n);
  std::vector<double> cs(cfg.restart), sn(cfg.restart), g(cfg.restart + 1);
  DenseMatrix rmat(cfg.restart, cfg.restart);
  double prev_rnorm = INFINITY;

  while (true) {
    op.apply(res.x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    const double rnorm = norm2(r);
    res.relative_residual = rnorm / bnorm;
    if (rnorm <= target) return res;
    if (!std::isfinite(rnorm)) {
      throw ConvergenceError("gmres: non-finite residual", res.x, res.relative_residual,
                             res.iterations);
    }
    if (res.iterations >= cfg.max_iters) {
      throw ConvergenceError("gmres: no convergence within " + std::to_string(cfg.max_iters) +
                                 " iterations (relative residual " +
                                 std::to_string(res.relative_residual) + ")",
                             res.x, res.relative_residual, res.iterations);
    }
    if (rnorm >= prev_rnorm) {
      throw ConvergenceError("gmres: stagnated at relative residual " +
                                 std::to_string(res.relative_residual),
                             res.x, res.relative_residual, res.iterations);
    }
    prev_rnorm = rnorm;

    proc.start(r);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;
    std::size_t j = 0;
    while (j < cfg.restart && res.iterations < cfg.max_iters) {
      proc.extend();
      ++res.iterations;
      ++thread_counters().gmres_iters;
      // Column j of Hbar, rotated by the previous Givens rotations.
      for (std::size_t i = 0; i <= j; ++i) rmat(i, j) = proc.h(i, j);
      for (std::size_t i = 0; i < j; ++i) {
        const double a = rmat(i, j);
        const double b = rmat(i + 1, j);
        rmat(i, j) = cs[i] * a + sn[i] * b;
        rmat(i + 1, j) = -sn[i] * a + cs[i] * b;
      }
      const double a = rmat(j, j);
      const double b = proc.h(j + 1, j);
      const double d = std::hypot(a, b);
      cs[j] = d == 0.0 ? 1.0 : a / d;
      sn[j] = d == 0.0 ? 0.0 : b / d;
      rmat(j, j) = d;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++j;
      if (std::abs(g[j]) <= target || proc.breakdown()) break;
    }

    // Back substitution R y = g, then x += V y.
    std::vector<double> y(j);
    for (std::size_t i = j; i-- > 0;) {
      double s = g[i];
      for (std::size_t c = i + 1; c < j; ++c) s -= rmat(i, c) * y[c];
      y[i] = rmat(i, i) == 0.0 ? 0.0 : s / rmat(i, i);
    }
    const auto& basis = proc.basis();
    for (std::size_t c = 0; c < j; ++c) axpy(y[c], basis[c], std::span<double>(res.x));
  }
}

}  // namespace

GmresResult gmres_solve(const LinearOperator& a, std::span<const double> b,
                        std::span<const double> x0, const GmresConfig& cfg) {
  const std::size_t n = a.size();
  if (b.size() != n || x0.size() != n) throw ArgumentError("gmres_solve: dimension mismatch");
  if (!(cfg.tol > 0.0) || cfg.restart == 0) throw ArgumentError("gmres_solve: invalid GmresConfig");
  if (!all_finite(b)) throw ArgumentError("gmres_solve: right-hand side is not finite");
  const IcFactor* pc = cfg.preconditioner.get();
  if (pc && pc->size() != n) throw ArgumentError("gmres_solve: preconditioner size mismatch");

  GmresResult out;
  if (!pc) {
    auto core = gmres_core(a, b, x0, cfg);
    out.x = std::move(core.x);
    out.iterations = core.iterations;
    out.relative_residual = core.relative_residual;
    out.converged = true;
    return out;
  }

  if (cfg.side == PreconditionerSide::left) {
    const LinearOperator op(n, [&](std::span<const double> x, std::span<double> y) {
      a.apply(x, y);
      pc->solve_lower(y);
      pc->solve_upper(y);
    });
    const Vector rhs = pc->apply(b);
    auto core = gmres_core(op, rhs, x0, cfg);
    out.x = std::move(core.x);
    out.iterations = core.iterations;
    out.relative_residual = core.relative_residual;
    out.converged = true;
    return out;
  }

  // Split: work with y = L^T x.
  const LinearOperator op(n, [&](std::span<const double> yv, std::span<double> out_vec) {
    Vector tmp(yv.begin(), yv.end());
    pc->solve_upper(tmp);
    a.apply(tmp, out_vec);
    pc->solve_lower(out_vec);
  });
  Vector rhs(b.begin(), b.end());
  pc->solve_lower(rhs);
  Vector y0(n, 0.0);
  {
    const auto& l = pc->lower();
    const auto rp = l.row_ptr();
    const auto ci = l.col_idx();
    const auto va = l.values();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) y0[ci[k]] += va[k] * x0[i];
    }
  }
  auto core = gmres_core(op, rhs, y0, cfg);
  pc->solve_upper(core.x);
  out.x = std::move(core.x);
  out.iterations = core.iterations;
  out.relative_residual = core.relative_residual;
  out.converged = true;
  return out;
}

}  // namespace imexp
