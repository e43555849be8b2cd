#include "imexp/phi_krylov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "imexp/arnoldi.hpp"
#include "imexp/dense.hpp"
#include "imexp/errors.hpp"
#include "imexp/phi.hpp"
#include "imexp/work_counters.hpp"

namespace imexp {

namespace {

// Basis sizes at which the residual estimate is evaluated.
constexpr std::array<std::size_t, 22> kCheckpoints = {1,  2,  3,  4,  5,  6,  8,  10, 12, 15, 18,
                                                      22, 27, 33, 40, 48, 58, 70, 84, 100, 120, 150};

bool is_checkpoint(std::size_t m, std::size_t max_basis) {
  return m == max_basis || std::find(kCheckpoints.begin(), kCheckpoints.end(), m) != kCheckpoints.end();
}

// exp of [[s H_m, 0], [s h_{m+1,m} e_m^T, 0]]: the leading m x m block is
// exp(s H_m) and entry (m, 0) is s h_{m+1,m} e_m^T phi_1(s H_m) e_1.
DenseMatrix corrected_exponential(const ArnoldiProcess& proc, double s) {
  const std::size_t m = proc.steps();
  DenseMatrix x(m + 1, m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) x(i, j) = s * proc.h(i, j);
  }
  x(m, m - 1) = s * proc.h(m, m - 1);
  return expm(x);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

KrylovOutcome phi_times_vector(const LinearOperator& a, int k, std::span<const double> v,
                               double tau, const KrylovConfig& cfg) {
  if (k < 0 || k > kMaxPhiOrder) throw ArgumentError("phi_times_vector: phi order out of range");
  if (v.size() != a.size()) throw ArgumentError("phi_times_vector: vector length mismatch");
  if (!std::isfinite(tau)) throw ArgumentError("phi_times_vector: tau must be finite");
  if (!(cfg.tol > 0.0) || cfg.max_basis < 2 || cfg.max_substeps == 0) {
    throw ArgumentError("phi_times_vector: invalid KrylovConfig");
  }

  const std::size_t n = v.size();
  const std::size_t p = static_cast<std::size_t>(k);
  KrylovOutcome out;
  out.result.assign(n, 0.0);

  const double vnorm = norm2(v);
  if (vnorm == 0.0) {
    out.converged = true;
    return out;
  }
  if (tau == 0.0) {
    out.result.assign(v.begin(), v.end());
    scale(1.0 / factorial(k), out.result);
    out.converged = true;
    return out;
  }

  // phi_k(B) v = y(1) for y(s) = sum_j s^j phi_j(sB) b_j with b_k = v and all
  // other b_j = 0, B = tau A. Advancing y from t to t + s needs
  //   exp(sB) y(t) + sum_{j=1}^{k} s^j phi_j(sB) w_j(t),
  //   w_j(t) = t^{k-j} / (k-j)! v,
  // which is the top block of exp(s Abar) [y(t); e_k / eta] with
  //   Abar = [[B, eta W], [0, J]],  W = [w_k, ..., w_1],  J = upper shift.
  Vector y(n, 0.0);
  if (p == 0) y.assign(v.begin(), v.end());
  double t = 0.0;
  double eta = 1.0;

  const LinearOperator augmented(n + p, [&](std::span<const double> x, std::span<double> out_vec) {
    a.apply(x.first(n), out_vec.first(n));
    for (std::size_t i = 0; i < n; ++i) out_vec[i] *= tau;
    if (p > 0) {
      // Column c of W is t^c / c! v.
      double coeff = 0.0;
      double tc = 1.0;
      for (std::size_t c = 0; c < p; ++c) {
        coeff += x[n + c] * tc;
        tc *= t / static_cast<double>(c + 1);
      }
      coeff *= eta;
      if (coeff != 0.0) {
        for (std::size_t i = 0; i < n; ++i) out_vec[i] += coeff * v[i];
      }
      for (std::size_t c = 0; c + 1 < p; ++c) out_vec[n + c] = x[n + c + 1];
      out_vec[n + p - 1] = 0.0;
    }
  });

  ArnoldiProcess proc(augmented, cfg.max_basis);
  Vector start(n + p, 0.0);
  double s_try = 1.0;
  std::size_t substeps = 0;

  while (t < 1.0) {
    if (substeps == cfg.max_substeps) {
      throw ConvergenceError("phi_times_vector: exceeded " + std::to_string(cfg.max_substeps) +
                                 " substeps at s = " + std::to_string(t),
                             y, 1.0 - t, out.total_matvecs);
    }
    const double remaining = 1.0 - t;
    double s = std::min(s_try, remaining);

    double wmax = 0.0;
    {
      double tc = 1.0;
      for (std::size_t c = 0; c < p; ++c) {
        wmax = std::max(wmax, tc);
        tc *= t / static_cast<double>(c + 1);
      }
    }
    eta = p > 0 ? 1.0 / (wmax * max_norm(v)) : 1.0;
    std::copy(y.begin(), y.end(), start.begin());
    if (p > 0) {
      std::fill(start.begin() + static_cast<std::ptrdiff_t>(n), start.end(), 0.0);
      start[n + p - 1] = 1.0 / eta;
    }
    const double beta = proc.start(start);

    DenseMatrix e;
    bool shrunk = false;
    while (true) {
      proc.extend();
      ++thread_counters().krylov_matvecs;
      ++out.total_matvecs;
      const std::size_t m = proc.steps();
      if (proc.breakdown()) {
        s = remaining;
        e = corrected_exponential(proc, s);
        break;
      }
      if (!is_checkpoint(m, cfg.max_basis)) continue;
      e = corrected_exponential(proc, s);
      double est = beta * std::abs(e(m, 0));
      if (est <= cfg.tol * s * vnorm) break;
      if (m < cfg.max_basis) continue;
      // Basis exhausted: shorten the substep on the same Krylov space.
      for (int tries = 0; tries < 60 && est > cfg.tol * s * vnorm; ++tries) {
        const double ratio = std::pow(cfg.tol * s * vnorm / est, 1.0 / static_cast<double>(m));
        s *= std::clamp(0.9 * ratio, 0.1, 0.5);
        e = corrected_exponential(proc, s);
        est = beta * std::abs(e(m, 0));
      }
      shrunk = true;
      break;
    }

    const std::size_t m = proc.steps();
    const auto& basis = proc.basis();
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double c = beta * e(j, 0);
      for (std::size_t i = 0; i < n; ++i) y[i] += c * basis[j][i];
    }
    t = (s >= remaining) ? 1.0 : t + s;
    out.basis_sizes.push_back(m);
    ++substeps;
    s_try = (shrunk || 2 * m > cfg.max_basis) ? s : 2.0 * s;
  }

  out.result = std::move(y);
  out.converged = true;
  return out;
}

}  // namespace imexp
