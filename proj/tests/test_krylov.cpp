#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "imexp/arnoldi.hpp"
#include "imexp/errors.hpp"
#include "imexp/laplacian.hpp"
#include "imexp/phi_krylov.hpp"
#include "imexp/work_counters.hpp"
#include "oracles.hpp"

using namespace imexp;
namespace t = imexp::testing;

namespace {

LinearOperator dense_op(const Eigen::MatrixXd& m) {
  return LinearOperator(static_cast<std::size_t>(m.rows()),
                        [m](std::span<const double> x, std::span<double> y) {
                          Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
                          Eigen::Map<Eigen::VectorXd>(y.data(), y.size()) = m * xv;
                        });
}

CsrMatrix lap1d(std::size_t interior) {
  return build_laplacian_1d_dirichlet(GridSpec{.dim = 1, .points_per_axis = interior + 2});
}

double phi_scalar_oracle(int k, double z) {
  return t::phi_symmetric(k, Eigen::MatrixXd::Constant(1, 1, z))(0, 0);
}

double max_err(const Vector& a, const Eigen::VectorXd& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b(i)));
  return e;
}

}  // namespace

TEST(Arnoldi, IdentityBreaksDownAfterOneStep) {
  const LinearOperator id = LinearOperator::from_matrix(CsrMatrix::identity(5));
  const Vector v = {1, 2, 3, 4, 5};
  const ArnoldiResult r = arnoldi(id, v, 4);
  EXPECT_TRUE(r.breakdown);
  EXPECT_EQ(r.steps, 1u);
  EXPECT_NEAR(r.hessenberg(0, 0), 1.0, 1e-15);
}

TEST(Arnoldi, SymmetricGivesTridiagonal) {
  const CsrMatrix lap = lap1d(30);
  std::mt19937_64 rng(3);
  const Vector v = t::random_vector(rng, 30);
  const ArnoldiResult r = arnoldi(LinearOperator::from_matrix(lap), v, 8);
  ASSERT_EQ(r.steps, 8u);
  const double scale = lap.norm_inf();
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      if (i + 1 < j) EXPECT_LE(std::abs(r.hessenberg(i, j)), 1e-10 * scale) << i << "," << j;
}

TEST(Arnoldi, RelationAndOrthonormality) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd m = t::random_matrix(rng, 20, 4.0);
  const Vector v = t::random_vector(rng, 20);
  const std::size_t steps = 8;
  const ArnoldiResult r = arnoldi(dense_op(m), v, steps);
  ASSERT_EQ(r.basis.size(), steps + 1);
  Eigen::MatrixXd vm(20, steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) vm.col(j) = t::to_eigen(r.basis[j]);
  const Eigen::MatrixXd hbar = t::to_eigen(r.hessenberg);
  const Eigen::MatrixXd resid = m * vm.leftCols(steps) - vm * hbar;
  EXPECT_LE(resid.cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::MatrixXd gram = vm.transpose() * vm;
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(steps + 1, steps + 1)).cwiseAbs().maxCoeff(), 1e-13);
  // The first basis vector is v normalized.
  EXPECT_NEAR(vm.col(0).dot(t::to_eigen(v)), t::to_eigen(v).norm(), 1e-13);
}

TEST(Arnoldi, ZeroStartRejected) {
  const LinearOperator id = LinearOperator::from_matrix(CsrMatrix::identity(3));
  EXPECT_THROW(arnoldi(id, Vector(3, 0.0), 2), ArgumentError);
}

TEST(PhiKrylov, ZeroOperator) {
  const Vector v = {2, 4};
  const KrylovOutcome r = phi_times_vector(LinearOperator::zero(2), 2, v, 0.7);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.result[0], 1.0, 1e-15);
  EXPECT_NEAR(r.result[1], 2.0, 1e-15);
}

TEST(PhiKrylov, ZeroVectorAndZeroTau) {
  const LinearOperator lap = LinearOperator::from_matrix(lap1d(10));
  const KrylovOutcome z = phi_times_vector(lap, 1, Vector(10, 0.0), 0.1);
  for (double x : z.result) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(z.total_matvecs, 0u);
  const Vector v(10, 3.0);
  const KrylovOutcome r = phi_times_vector(lap, 2, v, 0.0);
  for (double x : r.result) EXPECT_DOUBLE_EQ(x, 1.5);
}

TEST(PhiKrylov, DiagonalClosedForm) {
  const std::size_t n = 12;
  std::vector<Triplet> trip;
  for (std::size_t i = 0; i < n; ++i) trip.push_back({i, i, -static_cast<double>(i * i)});
  const CsrMatrix d = CsrMatrix::from_triplets(n, n, trip);
  const Vector v(n, 1.0);
  for (int k = 0; k <= 3; ++k) {
    const KrylovOutcome r = phi_times_vector(LinearOperator::from_matrix(d), k, v, 0.05);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = -0.05 * static_cast<double>(i * i);
      EXPECT_NEAR(r.result[i], phi_scalar_oracle(k, z), 1e-12) << "k=" << k << " i=" << i;
    }
  }
}

TEST(PhiKrylov, MatchesDenseOnLaplacian) {
  const CsrMatrix lap = lap1d(20);
  const Eigen::MatrixXd a = t::to_eigen(lap);
  std::mt19937_64 rng(11);
  const Vector v = t::random_vector(rng, 20);
  for (int k = 0; k <= 3; ++k) {
    for (double tau : {1e-3, 1e-2}) {
      const KrylovOutcome r = phi_times_vector(LinearOperator::from_matrix(lap), k, v, tau);
      const Eigen::VectorXd ref = t::phi_symmetric(k, tau * a) * t::to_eigen(v);
      EXPECT_LE(max_err(r.result, ref), 1e-11) << "k=" << k << " tau=" << tau;
    }
  }
}

TEST(PhiKrylov, MatchesAugmentedExponentialOnNonsymmetric) {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd m = t::random_matrix(rng, 15, 20.0);
  const Vector v = t::random_vector(rng, 15);
  for (int k = 1; k <= 2; ++k) {
    const KrylovOutcome r = phi_times_vector(dense_op(m), k, v, 0.5);
    const Eigen::VectorXd ref = t::phi_augmented(k, 0.5 * m, t::to_eigen(v));
    EXPECT_LE(max_err(r.result, ref), 1e-11 * ref.cwiseAbs().maxCoeff()) << "k=" << k;
  }
  const KrylovOutcome e = phi_times_vector(dense_op(m), 0, v, 0.5);
  const Eigen::VectorXd ref0 = (0.5 * m).exp() * t::to_eigen(v);
  EXPECT_LE(max_err(e.result, ref0), 1e-11 * ref0.cwiseAbs().maxCoeff());
}

TEST(PhiKrylov, StiffOperatorNeedsSubsteps) {
  // tau * ||A|| around 4e3: one exponential on a small basis cannot be accurate.
  const CsrMatrix lap = lap1d(40);
  std::mt19937_64 rng(19);
  const Vector v = t::random_vector(rng, 40);
  KrylovConfig cfg;
  cfg.max_basis = 20;
  const KrylovOutcome r = phi_times_vector(LinearOperator::from_matrix(lap), 2, v, 0.6, cfg);
  EXPECT_GT(r.basis_sizes.size(), 1u);
  const Eigen::VectorXd ref = t::phi_symmetric(2, 0.6 * t::to_eigen(lap)) * t::to_eigen(v);
  EXPECT_LE(max_err(r.result, ref), 1e-10);
}

TEST(PhiKrylov, Linearity) {
  const LinearOperator lap = LinearOperator::from_matrix(lap1d(25));
  std::mt19937_64 rng(21);
  const Vector x = t::random_vector(rng, 25);
  const Vector y = t::random_vector(rng, 25);
  Vector comb(25);
  for (std::size_t i = 0; i < 25; ++i) comb[i] = 2.0 * x[i] - 3.0 * y[i];
  const Vector px = phi_times_vector(lap, 1, x, 1e-2).result;
  const Vector py = phi_times_vector(lap, 1, y, 1e-2).result;
  const Vector pc = phi_times_vector(lap, 1, comb, 1e-2).result;
  for (std::size_t i = 0; i < 25; ++i) EXPECT_NEAR(pc[i], 2.0 * px[i] - 3.0 * py[i], 1e-11);
}

TEST(PhiKrylov, MatvecCountMatchesBasisSizes) {
  const LinearOperator lap = LinearOperator::from_matrix(lap1d(30));
  std::mt19937_64 rng(27);
  const Vector v = t::random_vector(rng, 30);
  const WorkCounters before = thread_counters();
  const KrylovOutcome r = phi_times_vector(lap, 2, v, 1e-2);
  const WorkCounters used = thread_counters() - before;
  std::size_t sum = 0;
  for (std::size_t m : r.basis_sizes) sum += m;
  EXPECT_EQ(sum, r.total_matvecs);
  EXPECT_EQ(used.krylov_matvecs, r.total_matvecs);
}

TEST(PhiKrylov, SubstepLimit) {
  const LinearOperator lap = LinearOperator::from_matrix(lap1d(60));
  std::mt19937_64 rng(29);
  const Vector v = t::random_vector(rng, 60);
  KrylovConfig cfg;
  cfg.max_basis = 3;
  cfg.max_substeps = 2;
  EXPECT_THROW(phi_times_vector(lap, 1, v, 10.0, cfg), ConvergenceError);
}

TEST(PhiKrylov, ArgumentErrors) {
  const LinearOperator lap = LinearOperator::from_matrix(lap1d(5));
  EXPECT_THROW(phi_times_vector(lap, 1, Vector(4, 1.0), 0.1), ArgumentError);
  EXPECT_THROW(phi_times_vector(lap, -1, Vector(5, 1.0), 0.1), ArgumentError);
}

TEST(PhiKrylov, AugmentedOracleAgreesWithQuadrature) {
  // Cross-check of the two oracles on a mild argument.
  std::mt19937_64 rng(31);
  const Eigen::MatrixXd m = t::random_matrix(rng, 6, 1.0);
  const Eigen::VectorXd v = t::to_eigen(t::random_vector(rng, 6));
  for (int k = 1; k <= 3; ++k)
    EXPECT_LE((t::phi_augmented(k, m, v) - t::phi_quadrature(k, m) * v).cwiseAbs().maxCoeff(), 1e-11);
}
