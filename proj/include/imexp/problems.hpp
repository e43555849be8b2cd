#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>

#include "imexp/laplacian.hpp"
#include "imexp/sparse_matrix.hpp"
#include "imexp/vector_ops.hpp"

namespace imexp {

/// One semilinear system u' = L u + N(t, u) after spatial discretization.
struct SplitSystem {
  using Nonlinear = std::function<void(double t, std::span<const double> u, std::span<double> out)>;
  /// out = N'(u) v
  using JacobianAction =
      std::function<void(std::span<const double> u, std::span<const double> v, std::span<double> out)>;
  using Exact = std::function<Vector(double t)>;

  std::size_t dim = 0;
  std::shared_ptr<const CsrMatrix> linear;
  Nonlinear nonlinear;
  JacobianAction jv;
  Exact exact;  ///< empty when no closed form is known
  GridSpec grid;
  std::string label;
  Vector initial;
  double t0 = 0.0;
  double t_end = 1.0;

  const CsrMatrix& L() const { return *linear; }
  Vector N(double t, std::span<const double> u) const;
  Vector J(std::span<const double> u, std::span<const double> v) const;
  bool has_exact() const noexcept { return static_cast<bool>(exact); }
};

/// u_t - u_xx = int_0^1 u dx + Phi(x, t) on [0, 1] x [0, 1], homogeneous
/// Dirichlet data, exact solution x(1-x)e^t. `interior` unknowns.
SplitSystem make_semilinear_parabolic(std::size_t interior);

/// u_t = Lap u - (u^3 - u) / eps^2 on the periodic square [-0.5, 0.5]^2 with
/// a circular tanh interface of radius r0. `n` cells per axis.
SplitSystem make_allen_cahn(double eps, std::size_t n, double r0 = 0.4);

struct SchnakenbergParams {
  double a = 0.1;
  double b = 0.9;
  double d = 10.0;
  double gamma = 1000.0;
};

/// Schnakenberg reaction-diffusion on [0, 1]^2 with homogeneous Neumann data.
/// State is (u, v) stacked, length 2 n^2. The whole reaction lives in N.
SplitSystem make_schnakenberg(const SchnakenbergParams& params, std::size_t n);
inline SplitSystem make_schnakenberg(double gamma, std::size_t n) {
  return make_schnakenberg(SchnakenbergParams{.gamma = gamma}, n);
}

/// Linear heat equation u_t = u_xx with N == 0, started from sin(pi x), whose
/// semi-discrete solution decays exactly with the lowest discrete eigenvalue.
SplitSystem make_linear_heat(std::size_t interior, double t_end = 0.1);

/// Composite trapezoid rule over [0, 1] for interior samples with zero
/// boundary values.
double trapezoid_interior(std::span<const double> u, double spacing) noexcept;

}  // namespace imexp
