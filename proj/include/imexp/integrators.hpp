#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "imexp/gmres.hpp"
#include "imexp/phi_krylov.hpp"
#include "imexp/problems.hpp"
#include "imexp/work_counters.hpp"

namespace imexp {

enum class IntegratorKind { imexp_rk1, imexp_rk2, himexp2j, himexp2n, sbdf2 };

std::string_view to_string(IntegratorKind kind) noexcept;
/// Accepts the canonical names (ImExpRK1, HImExp2J, 2-sBDF, ...) case-insensitively.
IntegratorKind parse_integrator_kind(std::string_view name);

/// How 2-sBDF obtains u_1 from u_0.
enum class SbdfStartup { imexp_rk2, imex_euler };

struct IntegratorConfig {
  IntegratorKind kind = IntegratorKind::imexp_rk2;
  double h = 1e-2;
  double t0 = 0.0;
  double t_end = 1.0;
  GmresConfig gmres;
  KrylovConfig krylov;
  bool use_preconditioner = true;
  SbdfStartup startup = SbdfStartup::imexp_rk2;
  double blowup_threshold = 1e10;

  /// Number of constant steps; throws ArgumentError unless (t_end-t0)/h is
  /// an integer (to 1e-9 relative).
  std::size_t step_count() const;
};

struct StepContext {
  Vector u;
  double t = 0.0;
  std::optional<Vector> u_prev;  ///< 2-sBDF only
};

/// Intermediate quantities of the last ImExpRK2-family step.
struct StageTrace {
  Vector increment;  ///< w = (I - h/2 L)^{-1} F(t_n, u_n)
  Vector stage;      ///< U_{n2} = u_n + h/2 w
  Vector defect;     ///< D = N(t_n + h/2, U_{n2}) - N(t_n, u_n)
  Vector phi_term;   ///< 2 h phi_2(h X) D
};

struct RunStats {
  std::size_t steps = 0;
  std::uint64_t spmv_count = 0;
  std::uint64_t gmres_iters_total = 0;
  std::uint64_t krylov_matvecs_total = 0;
  std::uint64_t n_evals = 0;
  std::uint64_t jv_evals = 0;
  double wall_time = 0.0;
};

struct IntegrationResult {
  Vector final_state;
  RunStats stats;
};

/// One (system, config) run: owns the shifted matrices and their IC(0)
/// factors, built once. Not shareable across threads.
class Stepper {
 public:
  Stepper(const SplitSystem& sys, IntegratorConfig cfg);

  const IntegratorConfig& config() const noexcept { return cfg_; }

  /// Advances ctx by one step of the configured method and returns u_{n+1}.
  /// ctx itself is not modified.
  Vector step(const StepContext& ctx);

  Vector step_imexprk1(const StepContext& ctx);
  Vector step_imexprk2(const StepContext& ctx);
  Vector step_himexp2j(const StepContext& ctx);
  Vector step_himexp2n(const StepContext& ctx);
  Vector step_sbdf2(const StepContext& ctx);

  const StageTrace& last_trace() const noexcept { return trace_; }
  /// True if an IC(0) factorization failed and the run fell back to plain GMRES.
  bool preconditioner_fallback() const noexcept { return fallback_; }

 private:
  enum class PhiOperator { linear, jacobian, nonlinear_jacobian };

  Vector F(double t, std::span<const double> u);
  Vector eval_N(double t, std::span<const double> u);
  /// I - alpha L with its operator and optional IC(0) factor.
  struct ShiftedSystem {
    LinearOperator op;
    std::shared_ptr<const IcFactor> pc;
  };

  ShiftedSystem make_shifted(double alpha);
  Vector solve(const ShiftedSystem& sys, std::span<const double> rhs,
               std::span<const double> guess);
  Vector step_rk2_family(const StepContext& ctx, PhiOperator which);
  Vector nonlinear_cached(double t, std::span<const double> u);

  const SplitSystem& sys_;
  IntegratorConfig cfg_;
  LinearOperator lin_op_;
  std::optional<ShiftedSystem> full_;  ///< I - h L
  std::optional<ShiftedSystem> half_;  ///< I - h/2 L
  std::optional<ShiftedSystem> bdf_;   ///< I - 2h/3 L, i.e. (3I - 2h L) / 3
  bool fallback_ = false;
  StageTrace trace_;
  // Last N(t, u) evaluated by 2-sBDF, reused as N(t_{n-1}, u_{n-1}).
  double cached_t_ = 0.0;
  Vector cached_u_, cached_n_;
};

/// Constant-step driver from cfg.t0 to cfg.t_end. Throws BlowUpError when the
/// max-norm exceeds cfg.blowup_threshold or goes non-finite, and lets
/// ConvergenceError from the solvers propagate.
IntegrationResult integrate(const SplitSystem& sys, const IntegratorConfig& cfg,
                            std::span<const double> u0);

// Single-step conveniences; each builds a Stepper (and its factors) per call.
Vector step_imexprk1(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg);
Vector step_imexprk2(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg);
Vector step_himexp2j(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg);
Vector step_himexp2n(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg);
Vector step_sbdf2(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg);

}  // namespace imexp
