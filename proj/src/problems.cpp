#include "imexp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "imexp/errors.hpp"
#include "imexp/work_counters.hpp"

namespace imexp {

Vector SplitSystem::N(double t, std::span<const double> u) const {
  if (u.size() != dim) throw ArgumentError(label + ": state length mismatch in N");
  Vector out(dim);
  nonlinear(t, u, out);
  ++thread_counters().n_evals;
  return out;
}

Vector SplitSystem::J(std::span<const double> u, std::span<const double> v) const {
  if (u.size() != dim || v.size() != dim) throw ArgumentError(label + ": length mismatch in jv");
  Vector out(dim);
  jv(u, v, out);
  ++thread_counters().jv_evals;
  return out;
}

double trapezoid_interior(std::span<const double> u, double spacing) noexcept {
  double s = 0.0;
  for (double v : u) s += v;
  return spacing * s;
}

SplitSystem make_semilinear_parabolic(std::size_t interior) {
  if (interior < 3) throw ArgumentError("make_semilinear_parabolic: need at least 3 interior nodes");
  SplitSystem sys;
  sys.grid = GridSpec{.dim = 1,
                      .points_per_axis = interior + 2,
                      .lower = 0.0,
                      .upper = 1.0,
                      .bc = BoundaryCondition::dirichlet_homogeneous};
  sys.dim = interior;
  sys.linear = std::make_shared<const CsrMatrix>(build_laplacian_1d_dirichlet(sys.grid));
  sys.label = "parabolic";
  sys.t0 = 0.0;
  sys.t_end = 1.0;

  const double dx = sys.grid.spacing();
  Vector x(interior);
  for (std::size_t i = 0; i < interior; ++i) x[i] = sys.grid.coordinate(i);

  // Phi = u_t - u_xx - int u for u = x(1-x)e^t.
  sys.nonlinear = [x, dx](double t, std::span<const double> u, std::span<double> out) {
    const double integral = trapezoid_interior(u, dx);
    const double et = std::exp(t);
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = integral + et * (x[i] * (1.0 - x[i]) + 2.0 - 1.0 / 6.0);
    }
  };
  sys.jv = [dx](std::span<const double>, std::span<const double> v, std::span<double> out) {
    const double integral = trapezoid_interior(v, dx);
    std::fill(out.begin(), out.end(), integral);
  };
  sys.exact = [x](double t) {
    Vector u(x.size());
    const double et = std::exp(t);
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i] * (1.0 - x[i]) * et;
    return u;
  };
  sys.initial = sys.exact(0.0);
  return sys;
}

SplitSystem make_allen_cahn(double eps, std::size_t n, double r0) {
  if (!(eps > 0.0)) throw ArgumentError("make_allen_cahn: eps must be positive");
  if (n < 8) throw ArgumentError("make_allen_cahn: need at least 8 cells per axis");
  SplitSystem sys;
  sys.grid = GridSpec{.dim = 2,
                      .points_per_axis = n,
                      .lower = -0.5,
                      .upper = 0.5,
                      .bc = BoundaryCondition::periodic};
  sys.dim = n * n;
  sys.linear = std::make_shared<const CsrMatrix>(build_laplacian_2d(sys.grid));
  sys.label = "allencahn";
  sys.t0 = 0.0;
  sys.t_end = 0.075;

  const double inv_eps2 = 1.0 / (eps * eps);
  sys.nonlinear = [inv_eps2](double, std::span<const double> u, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = -inv_eps2 * (u[i] * u[i] * u[i] - u[i]);
  };
  sys.jv = [inv_eps2](std::span<const double> u, std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = -inv_eps2 * (3.0 * u[i] * u[i] - 1.0) * v[i];
  };

  sys.initial.resize(sys.dim);
  const double width = std::numbers::sqrt2 * eps;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = sys.grid.coordinate(i);
      const double yj = sys.grid.coordinate(j);
      sys.initial[j * n + i] = std::tanh((r0 - std::hypot(xi, yj)) / width);
    }
  }
  return sys;
}

SplitSystem make_schnakenberg(const SchnakenbergParams& p, std::size_t n) {
  if (!(p.gamma > 0.0) || !(p.a > 0.0) || !(p.b > 0.0) || !(p.d > 0.0)) {
    throw ArgumentError("make_schnakenberg: parameters must be positive");
  }
  if (n < 8) throw ArgumentError("make_schnakenberg: need at least 8 cells per axis");
  SplitSystem sys;
  sys.grid = GridSpec{.dim = 2,
                      .points_per_axis = n,
                      .lower = 0.0,
                      .upper = 1.0,
                      .bc = BoundaryCondition::neumann_homogeneous};
  const std::size_t m = n * n;
  sys.dim = 2 * m;
  const CsrMatrix lap = build_laplacian_2d(sys.grid);
  const CsrMatrix blocks[] = {lap, lap};
  const double scales[] = {1.0, p.d};
  sys.linear = std::make_shared<const CsrMatrix>(block_diagonal(blocks, scales));
  sys.label = "schnakenberg";
  sys.t0 = 0.0;
  sys.t_end = 0.1;

  sys.nonlinear = [p, m](double, std::span<const double> s, std::span<double> out) {
    for (std::size_t i = 0; i < m; ++i) {
      const double u = s[i];
      const double v = s[m + i];
      const double u2v = u * u * v;
      out[i] = p.gamma * (p.a - u + u2v);
      out[m + i] = p.gamma * (p.b - u2v);
    }
  };
  sys.jv = [p, m](std::span<const double> s, std::span<const double> w, std::span<double> out) {
    for (std::size_t i = 0; i < m; ++i) {
      const double u = s[i];
      const double v = s[m + i];
      const double wu = w[i];
      const double wv = w[m + i];
      out[i] = p.gamma * ((-1.0 + 2.0 * u * v) * wu + u * u * wv);
      out[m + i] = p.gamma * (-2.0 * u * v * wu - u * u * wv);
    }
  };

  // Equilibrium times a fixed multi-mode cosine perturbation of relative size 1e-3.
  const double ubar = p.a + p.b;
  const double vbar = p.b / (ubar * ubar);
  sys.initial.resize(sys.dim);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = sys.grid.coordinate(i);
      const double y = sys.grid.coordinate(j);
      double pert = 0.0;
      for (int k = 1; k <= 8; ++k) {
        const double w = 2.0 * std::numbers::pi * k;
        pert += std::cos(w * x) * std::cos(w * y) / k;
      }
      sys.initial[j * n + i] = ubar * (1.0 + 1e-3 * pert);
      sys.initial[m + j * n + i] = vbar * (1.0 + 1e-3 * pert);
    }
  }
  return sys;
}

SplitSystem make_linear_heat(std::size_t interior, double t_end) {
  if (interior < 3) throw ArgumentError("make_linear_heat: need at least 3 interior nodes");
  SplitSystem sys;
  sys.grid = GridSpec{.dim = 1,
                      .points_per_axis = interior + 2,
                      .lower = 0.0,
                      .upper = 1.0,
                      .bc = BoundaryCondition::dirichlet_homogeneous};
  sys.dim = interior;
  sys.linear = std::make_shared<const CsrMatrix>(build_laplacian_1d_dirichlet(sys.grid));
  sys.label = "heat";
  sys.t0 = 0.0;
  sys.t_end = t_end;
  sys.nonlinear = [](double, std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  sys.jv = [](std::span<const double>, std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  const double dx = sys.grid.spacing();
  const double s = std::sin(std::numbers::pi * dx / 2.0);
  const double lambda = -4.0 / (dx * dx) * s * s;
  Vector mode(interior);
  for (std::size_t i = 0; i < interior; ++i) mode[i] = std::sin(std::numbers::pi * sys.grid.coordinate(i));
  sys.exact = [mode, lambda](double t) {
    Vector u = mode;
    scale(std::exp(lambda * t), u);
    return u;
  };
  sys.initial = mode;
  return sys;
}

}  // namespace imexp
