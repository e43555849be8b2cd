#include "imexp/integrators.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <iostream>
#include <string>

#include "imexp/errors.hpp"

namespace imexp {

std::string_view to_string(IntegratorKind kind) noexcept {
  switch (kind) {
    case IntegratorKind::imexp_rk1:
      return "ImExpRK1";
    case IntegratorKind::imexp_rk2:
      return "ImExpRK2";
    case IntegratorKind::himexp2j:
      return "HImExp2J";
    case IntegratorKind::himexp2n:
      return "HImExp2N";
    case IntegratorKind::sbdf2:
      return "2-sBDF";
  }
  return "?";
}

IntegratorKind parse_integrator_kind(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "imexprk1") return IntegratorKind::imexp_rk1;
  if (key == "imexprk2") return IntegratorKind::imexp_rk2;
  if (key == "himexp2j") return IntegratorKind::himexp2j;
  if (key == "himexp2n") return IntegratorKind::himexp2n;
  if (key == "2sbdf" || key == "sbdf2") return IntegratorKind::sbdf2;
  throw ArgumentError("unknown integrator '" + std::string(name) + "'");
}

std::size_t IntegratorConfig::step_count() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("IntegratorConfig: h must be positive");
  if (!(t_end >= t0)) throw ArgumentError("IntegratorConfig: t_end precedes t0");
  const double ratio = (t_end - t0) / h;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw ArgumentError("IntegratorConfig: (t_end - t0) / h = " + std::to_string(ratio) +
                        " is not an integer");
  }
  return static_cast<std::size_t>(steps);
}

Stepper::Stepper(const SplitSystem& sys, IntegratorConfig cfg)
    : sys_(sys), cfg_(std::move(cfg)), lin_op_(LinearOperator::from_matrix(sys.linear)) {
  if (!(cfg_.h > 0.0)) throw ArgumentError("Stepper: h must be positive");
  switch (cfg_.kind) {
    case IntegratorKind::imexp_rk1:
      full_ = make_shifted(cfg_.h);
      break;
    case IntegratorKind::imexp_rk2:
    case IntegratorKind::himexp2j:
    case IntegratorKind::himexp2n:
      half_ = make_shifted(0.5 * cfg_.h);
      break;
    case IntegratorKind::sbdf2:
      bdf_ = make_shifted(2.0 * cfg_.h / 3.0);
      if (cfg_.startup == SbdfStartup::imexp_rk2) {
        half_ = make_shifted(0.5 * cfg_.h);
      } else {
        full_ = make_shifted(cfg_.h);
      }
      break;
  }
}

Stepper::ShiftedSystem Stepper::make_shifted(double alpha) {
  auto mat = std::make_shared<const CsrMatrix>(shift_identity(sys_.L(), alpha));
  ShiftedSystem s{LinearOperator::from_matrix(mat), nullptr};
  if (cfg_.use_preconditioner) {
    try {
      s.pc = std::make_shared<const IcFactor>(ichol_zero_fill(*mat));
    } catch (const FactorizationError& e) {
      std::cerr << "warning: " << e.what() << "; continuing without preconditioner\n";
      fallback_ = true;
    }
  }
  return s;
}

Vector Stepper::solve(const ShiftedSystem& s, std::span<const double> rhs,
                      std::span<const double> guess) {
  GmresConfig g = cfg_.gmres;
  g.preconditioner = s.pc;
  return gmres_solve(s.op, rhs, guess, g).x;
}

Vector Stepper::F(double t, std::span<const double> u) {
  Vector f = spmv(sys_.L(), u);
  const Vector n = sys_.N(t, u);
  axpy(1.0, std::span<const double>(n), std::span<double>(f));
  return f;
}

Vector Stepper::step(const StepContext& ctx) {
  switch (cfg_.kind) {
    case IntegratorKind::imexp_rk1:
      return step_imexprk1(ctx);
    case IntegratorKind::imexp_rk2:
      return step_imexprk2(ctx);
    case IntegratorKind::himexp2j:
      return step_himexp2j(ctx);
    case IntegratorKind::himexp2n:
      return step_himexp2n(ctx);
    case IntegratorKind::sbdf2:
      return step_sbdf2(ctx);
  }
  throw ArgumentError("Stepper: unknown integrator kind");
}

Vector Stepper::step_imexprk1(const StepContext& ctx) {
  if (ctx.u.size() != sys_.dim) throw ArgumentError("step_imexprk1: state length mismatch");
  if (!full_) full_ = make_shifted(cfg_.h);
  const Vector f = F(ctx.t, ctx.u);
  const Vector x = solve(*full_, f, f);
  return axpy(cfg_.h, x, ctx.u);
}

Vector Stepper::step_imexprk2(const StepContext& ctx) {
  return step_rk2_family(ctx, PhiOperator::linear);
}

Vector Stepper::step_himexp2j(const StepContext& ctx) {
  return step_rk2_family(ctx, PhiOperator::jacobian);
}

Vector Stepper::step_himexp2n(const StepContext& ctx) {
  return step_rk2_family(ctx, PhiOperator::nonlinear_jacobian);
}

Vector Stepper::step_rk2_family(const StepContext& ctx, PhiOperator which) {
  if (ctx.u.size() != sys_.dim) throw ArgumentError("step: state length mismatch");
  if (!half_) half_ = make_shifted(0.5 * cfg_.h);
  const double h = cfg_.h;
  const std::span<const double> u = ctx.u;

  // One solve serves both the stage and the update.
  Vector f = spmv(sys_.L(), u);
  const Vector n_u = sys_.N(ctx.t, u);
  axpy(1.0, std::span<const double>(n_u), std::span<double>(f));
  trace_.increment = solve(*half_, f, f);
  trace_.stage = axpy(0.5 * h, trace_.increment, ctx.u);

  trace_.defect = sys_.N(ctx.t + 0.5 * h, trace_.stage);
  axpy(-1.0, std::span<const double>(n_u), std::span<double>(trace_.defect));

  LinearOperator op;
  switch (which) {
    case PhiOperator::linear:
      op = lin_op_;
      break;
    case PhiOperator::jacobian:
      op = LinearOperator(sys_.dim, [this, u](std::span<const double> v, std::span<double> y) {
        spmv(sys_.L(), v, y);
        const Vector jv = sys_.J(u, v);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += jv[i];
      });
      break;
    case PhiOperator::nonlinear_jacobian:
      op = LinearOperator(sys_.dim, [this, u](std::span<const double> v, std::span<double> y) {
        const Vector jv = sys_.J(u, v);
        std::copy(jv.begin(), jv.end(), y.begin());
      });
      break;
  }
  const KrylovOutcome phi = phi_times_vector(op, 2, trace_.defect, h, cfg_.krylov);
  trace_.phi_term = phi.result;
  scale(2.0 * h, trace_.phi_term);

  Vector next = axpy(h, trace_.increment, ctx.u);
  axpy(1.0, std::span<const double>(trace_.phi_term), std::span<double>(next));
  return next;
}

Vector Stepper::nonlinear_cached(double t, std::span<const double> u) {
  if (!cached_u_.empty() && cached_t_ == t && std::equal(u.begin(), u.end(), cached_u_.begin(), cached_u_.end())) {
    return cached_n_;
  }
  cached_t_ = t;
  cached_u_.assign(u.begin(), u.end());
  cached_n_ = sys_.N(t, u);
  return cached_n_;
}

Vector Stepper::step_sbdf2(const StepContext& ctx) {
  if (!ctx.u_prev) throw ArgumentError("step_sbdf2: context lacks u_{n-1}");
  if (ctx.u.size() != sys_.dim || ctx.u_prev->size() != sys_.dim) {
    throw ArgumentError("step_sbdf2: state length mismatch");
  }
  if (!bdf_) bdf_ = make_shifted(2.0 * cfg_.h / 3.0);
  const double h = cfg_.h;
  const std::span<const double> u = ctx.u;
  const std::span<const double> up = *ctx.u_prev;

  const Vector n_prev = nonlinear_cached(ctx.t - h, up);
  const Vector n_cur = nonlinear_cached(ctx.t, u);
  // (3I - 2hL) U = 4u_n - u_{n-1} + 2h(2N_n - N_{n-1}), divided through by 3.
  Vector rhs(sys_.dim), guess(sys_.dim);
  for (std::size_t i = 0; i < sys_.dim; ++i) {
    rhs[i] = (4.0 * u[i] - up[i] + 2.0 * h * (2.0 * n_cur[i] - n_prev[i])) / 3.0;
    guess[i] = 2.0 * u[i] - up[i];
  }
  return solve(*bdf_, rhs, guess);
}

IntegrationResult integrate(const SplitSystem& sys, const IntegratorConfig& cfg,
                            std::span<const double> u0) {
  if (u0.size() != sys.dim) throw ArgumentError("integrate: initial state length mismatch");
  const std::size_t steps = cfg.step_count();
  const auto clock_start = std::chrono::steady_clock::now();
  const WorkCounters before = thread_counters();

  Stepper stepper(sys, cfg);
  StepContext ctx{Vector(u0.begin(), u0.end()), cfg.t0, std::nullopt};

  for (std::size_t n = 0; n < steps; ++n) {
    Vector next;
    if (cfg.kind == IntegratorKind::sbdf2 && n == 0) {
      next = cfg.startup == SbdfStartup::imexp_rk2 ? stepper.step_imexprk2(ctx)
                                                   : stepper.step_imexprk1(ctx);
    } else {
      next = stepper.step(ctx);
    }
    const double t_next = cfg.t0 + static_cast<double>(n + 1) * cfg.h;
    if (!all_finite(next) || max_norm(next) > cfg.blowup_threshold) {
      throw BlowUpError(std::string(to_string(cfg.kind)) + ": solution blew up at step " +
                            std::to_string(n + 1) + " (t = " + std::to_string(t_next) + ")",
                        n + 1, t_next);
    }
    if (cfg.kind == IntegratorKind::sbdf2) ctx.u_prev = std::move(ctx.u);
    ctx.u = std::move(next);
    ctx.t = t_next;
  }

  const WorkCounters work = thread_counters() - before;
  IntegrationResult r;
  r.final_state = std::move(ctx.u);
  r.stats.steps = steps;
  r.stats.spmv_count = work.spmv;
  r.stats.gmres_iters_total = work.gmres_iters;
  r.stats.krylov_matvecs_total = work.krylov_matvecs;
  r.stats.n_evals = work.n_evals;
  r.stats.jv_evals = work.jv_evals;
  r.stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  return r;
}

namespace {

Vector single_step(const StepContext& ctx, const SplitSystem& sys, IntegratorConfig cfg,
                   IntegratorKind kind) {
  cfg.kind = kind;
  Stepper s(sys, cfg);
  return s.step(ctx);
}

}  // namespace

Vector step_imexprk1(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg) {
  return single_step(ctx, sys, cfg, IntegratorKind::imexp_rk1);
}
Vector step_imexprk2(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg) {
  return single_step(ctx, sys, cfg, IntegratorKind::imexp_rk2);
}
Vector step_himexp2j(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg) {
  return single_step(ctx, sys, cfg, IntegratorKind::himexp2j);
}
Vector step_himexp2n(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg) {
  return single_step(ctx, sys, cfg, IntegratorKind::himexp2n);
}
Vector step_sbdf2(const StepContext& ctx, const SplitSystem& sys, const IntegratorConfig& cfg) {
  return single_step(ctx, sys, cfg, IntegratorKind::sbdf2);
}

}  // namespace imexp
