#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "imexp/errors.hpp"
#include "imexp/gmres.hpp"
#include "imexp/ichol.hpp"
#include "imexp/laplacian.hpp"
#include "imexp/work_counters.hpp"
#include "oracles.hpp"

using namespace imexp;
namespace t = imexp::testing;

namespace {

CsrMatrix lap1d(std::size_t interior) {
  return build_laplacian_1d_dirichlet(GridSpec{.dim = 1, .points_per_axis = interior + 2});
}

CsrMatrix lap2d_periodic(std::size_t n) {
  return build_laplacian_2d(GridSpec{.dim = 2, .points_per_axis = n, .lower = 0.0, .upper = 1.0,
                                     .bc = BoundaryCondition::periodic});
}

CsrMatrix diag(std::initializer_list<double> d) {
  std::vector<Triplet> trip;
  std::size_t i = 0;
  for (double x : d) {
    trip.push_back({i, i, x});
    ++i;
  }
  return CsrMatrix::from_triplets(i, i, trip);
}

double max_err(const Vector& a, const Eigen::VectorXd& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b(i)));
  return e;
}

}  // namespace

TEST(Gmres, Identity) {
  const Vector b = {1, -2, 3};
  const GmresResult r =
      gmres_solve(LinearOperator::from_matrix(CsrMatrix::identity(3)), b, Vector(3, 0.0), {});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.x[i], b[i], 1e-15);
}

TEST(Gmres, Diagonal) {
  const Vector b = {2, 4};
  const GmresResult r = gmres_solve(LinearOperator::from_matrix(diag({2, 4})), b, Vector(2, 0.0), {});
  EXPECT_NEAR(r.x[0], 1.0, 1e-14);
  EXPECT_NEAR(r.x[1], 1.0, 1e-14);
  EXPECT_LE(r.iterations, 2u);
}

TEST(Gmres, ZeroRhsGivesZero) {
  const GmresResult r = gmres_solve(LinearOperator::from_matrix(diag({2, 4})), Vector(2, 0.0),
                                    Vector{5, 5}, {});
  EXPECT_EQ(r.x[0], 0.0);
  EXPECT_EQ(r.iterations, 0u);
}

TEST(Gmres, ShiftedLaplacianMatchesDenseSolve) {
  const CsrMatrix a = shift_identity(lap1d(30), 0.5 * 1e-2);
  std::mt19937_64 rng(2);
  const Vector b = t::random_vector(rng, 30);
  GmresConfig cfg;
  cfg.restart = 30;
  const GmresResult r = gmres_solve(LinearOperator::from_matrix(a), b, Vector(30, 0.0), cfg);
  const Eigen::VectorXd ref = t::to_eigen(a).partialPivLu().solve(t::to_eigen(b));
  EXPECT_LE(max_err(r.x, ref), 1e-10);
  EXPECT_LE(r.relative_residual, cfg.tol);
}

TEST(Gmres, RestartedSolveOnNonsymmetric) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(25, 25) + t::random_matrix(rng, 25, 0.5);
  const LinearOperator op(25, [&](std::span<const double> x, std::span<double> y) {
    Eigen::Map<Eigen::VectorXd>(y.data(), 25) = m * Eigen::Map<const Eigen::VectorXd>(x.data(), 25);
  });
  const Vector b = t::random_vector(rng, 25);
  GmresConfig cfg;
  cfg.restart = 5;
  const GmresResult r = gmres_solve(op, b, Vector(25, 0.0), cfg);
  EXPECT_GT(r.iterations, 5u);
  EXPECT_LE(max_err(r.x, m.partialPivLu().solve(t::to_eigen(b))), 1e-11);
}

TEST(Gmres, ReportsFailureWithBestIterate) {
  const CsrMatrix a = shift_identity(lap1d(200), 10.0);
  std::mt19937_64 rng(6);
  const Vector b = t::random_vector(rng, 200);
  GmresConfig cfg;
  cfg.restart = 3;
  cfg.max_iters = 9;
  try {
    gmres_solve(LinearOperator::from_matrix(a), b, Vector(200, 0.0), cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best_iterate().size(), 200u);
    EXPECT_GT(e.residual(), cfg.tol);
    EXPECT_LE(e.iterations(), 9u);
  }
}

TEST(Gmres, ArgumentErrors) {
  const LinearOperator id = LinearOperator::from_matrix(CsrMatrix::identity(3));
  EXPECT_THROW(gmres_solve(id, Vector(2, 1.0), Vector(3, 0.0), {}), ArgumentError);
  GmresConfig bad;
  bad.tol = 0.0;
  EXPECT_THROW(gmres_solve(id, Vector(3, 1.0), Vector(3, 0.0), bad), ArgumentError);
  EXPECT_THROW(gmres_solve(id, Vector{1, NAN, 0}, Vector(3, 0.0), {}), ArgumentError);
}

TEST(Gmres, CountsIterations) {
  const CsrMatrix a = shift_identity(lap1d(40), 1e-2);
  const WorkCounters before = thread_counters();
  const GmresResult r = gmres_solve(LinearOperator::from_matrix(a), Vector(40, 1.0), Vector(40, 0.0), {});
  EXPECT_EQ((thread_counters() - before).gmres_iters, r.iterations);
}

TEST(Ichol, IdentityAndDiagonal) {
  const IcFactor f = ichol_zero_fill(CsrMatrix::identity(4));
  const Vector r = {1, 2, 3, 4};
  EXPECT_EQ(f.apply(r), r);

  const IcFactor g = ichol_zero_fill(diag({4, 9}));
  EXPECT_DOUBLE_EQ(g.lower().at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(g.lower().at(1, 1), 3.0);
  const Vector z = apply_preconditioner(g, Vector{8, 18});
  EXPECT_DOUBLE_EQ(z[0], 2.0);
  EXPECT_DOUBLE_EQ(z[1], 2.0);
}

TEST(Ichol, ExactOnTridiagonal) {
  // No fill occurs for a tridiagonal matrix, so IC(0) is the Cholesky factor.
  const CsrMatrix a = shift_identity(lap1d(20), 0.3);
  const IcFactor f = ichol_zero_fill(a);
  const Eigen::MatrixXd ref = t::to_eigen(a).llt().matrixL();
  EXPECT_LE((t::to_eigen(f.lower()) - ref).cwiseAbs().maxCoeff(), 1e-12);

  std::mt19937_64 rng(8);
  const Vector b = t::random_vector(rng, 20);
  GmresConfig cfg;
  cfg.preconditioner = std::make_shared<IcFactor>(f);
  const GmresResult r = gmres_solve(LinearOperator::from_matrix(a), b, Vector(20, 0.0), cfg);
  EXPECT_LE(r.iterations, 3u);
  EXPECT_LE(max_err(r.x, t::to_eigen(a).llt().solve(t::to_eigen(b))), 1e-11);
}

TEST(Ichol, PatternOn2d) {
  const CsrMatrix a = shift_identity(lap2d_periodic(8), 1e-3);
  const IcFactor f = ichol_zero_fill(a);
  const CsrMatrix& l = f.lower();
  // Same pattern as the lower triangle of a; (L L^T)_{ij} = a_ij on that pattern.
  const Eigen::MatrixXd ae = t::to_eigen(a);
  const Eigen::MatrixXd le = t::to_eigen(l);
  const Eigen::MatrixXd prod = le * le.transpose();
  std::size_t lower_nnz = 0;
  for (Eigen::Index i = 0; i < ae.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      if (ae(i, j) != 0.0) {
        ++lower_nnz;
        EXPECT_NEAR(prod(i, j), ae(i, j), 1e-10 * std::abs(ae(i, i)));
      }
  EXPECT_EQ(l.nnz(), lower_nnz);
}

TEST(Ichol, NonpositivePivot) {
  EXPECT_THROW(ichol_zero_fill(diag({1, -1})), FactorizationError);
  std::vector<Triplet> trip = {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 1}};
  EXPECT_THROW(ichol_zero_fill(CsrMatrix::from_triplets(2, 2, trip)), FactorizationError);
}

TEST(Ichol, ApplyPreconditionerMatchesTriangularSolves) {
  const CsrMatrix a = shift_identity(lap2d_periodic(6), 1e-2);
  const IcFactor f = ichol_zero_fill(a);
  std::mt19937_64 rng(10);
  const Vector r = t::random_vector(rng, 36);
  const Eigen::MatrixXd le = t::to_eigen(f.lower());
  const Eigen::VectorXd ref =
      (le * le.transpose()).ldlt().solve(t::to_eigen(r));
  EXPECT_LE(max_err(apply_preconditioner(f, r), ref), 1e-12);
}

class StabilityBounds : public ::testing::TestWithParam<double> {};

TEST_P(StabilityBounds, ImplicitAndCrankNicolsonAreContractive) {
  const double h = GetParam();
  const CsrMatrix lap = lap1d(100);
  const CsrMatrix full = shift_identity(lap, h);
  const CsrMatrix half = shift_identity(lap, 0.5 * h);
  const CsrMatrix plus = shift_identity(lap, -0.5 * h);
  std::mt19937_64 rng(12);
  GmresConfig cfg;
  cfg.restart = 20;
  cfg.preconditioner = std::make_shared<IcFactor>(ichol_zero_fill(full));
  GmresConfig cfg_half = cfg;
  cfg_half.preconditioner = std::make_shared<IcFactor>(ichol_zero_fill(half));
  for (int trial = 0; trial < 20; ++trial) {
    const Vector v = t::random_vector(rng, 100);
    const Vector x = gmres_solve(LinearOperator::from_matrix(full), v, Vector(100, 0.0), cfg).x;
    EXPECT_LE(norm2(x), norm2(v) + 1e-10);
    const Vector w = spmv(plus, v);
    const Vector y = gmres_solve(LinearOperator::from_matrix(half), w, Vector(100, 0.0), cfg_half).x;
    EXPECT_LE(norm2(y), norm2(v) + 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Steps, StabilityBounds, ::testing::Values(1e-3, 1.0, 10.0));

TEST(Preconditioning, AgreesWithUnpreconditionedAndSavesIterations) {
  const CsrMatrix a = shift_identity(lap2d_periodic(24), 1e-2);
  std::mt19937_64 rng(14);
  const Vector b = t::random_vector(rng, a.rows());
  GmresConfig plain;
  plain.restart = 20;
  plain.tol = 1e-10;
  GmresConfig left = plain;
  left.preconditioner = std::make_shared<IcFactor>(ichol_zero_fill(a));
  GmresConfig split = left;
  split.side = PreconditionerSide::split;
  const LinearOperator op = LinearOperator::from_matrix(a);
  const Vector x0(a.rows(), 0.0);
  const GmresResult rp = gmres_solve(op, b, x0, plain);
  const GmresResult rl = gmres_solve(op, b, x0, left);
  const GmresResult rs = gmres_solve(op, b, x0, split);
  EXPECT_LE(max_diff(rp.x, rl.x), 1e-8);
  EXPECT_LE(max_diff(rp.x, rs.x), 1e-8);
  EXPECT_LT(rl.iterations, rp.iterations);
  EXPECT_LT(rs.iterations, rp.iterations);
}

TEST(Preconditioning, SplitSideWithInitialGuess) {
  const CsrMatrix a = shift_identity(lap1d(50), 0.1);
  std::mt19937_64 rng(16);
  const Vector b = t::random_vector(rng, 50);
  const Vector x0 = t::random_vector(rng, 50);
  GmresConfig cfg;
  cfg.preconditioner = std::make_shared<IcFactor>(ichol_zero_fill(a));
  cfg.side = PreconditionerSide::split;
  const GmresResult r = gmres_solve(LinearOperator::from_matrix(a), b, x0, cfg);
  EXPECT_LE(max_err(r.x, t::to_eigen(a).llt().solve(t::to_eigen(b))), 1e-11);
}

TEST(Gmres, ReachesDefaultToleranceOnStiffShift) {
  // cond(I - 10 L) is about 4e5 for 100 interior points.
  const CsrMatrix a = shift_identity(lap1d(100), 10.0);
  std::mt19937_64 rng(18);
  GmresConfig cfg;
  cfg.restart = 20;
  cfg.max_iters = 5000;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector b = t::random_vector(rng, 100);
    const GmresResult r = gmres_solve(LinearOperator::from_matrix(a), b, Vector(100, 0.0), cfg);
    EXPECT_LE(max_err(r.x, t::to_eigen(a).llt().solve(t::to_eigen(b))), 1e-9);
  }
}
