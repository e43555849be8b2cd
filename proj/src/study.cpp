#include "imexp/study.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "imexp/errors.hpp"

namespace imexp {

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::parabolic:
      return "parabolic";
    case ProblemKind::allen_cahn:
      return "allencahn";
    case ProblemKind::schnakenberg:
      return "schnakenberg";
    case ProblemKind::heat:
      return "heat";
  }
  return "?";
}

ProblemKind parse_problem_kind(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "parabolic") return ProblemKind::parabolic;
  if (key == "allencahn") return ProblemKind::allen_cahn;
  if (key == "schnakenberg") return ProblemKind::schnakenberg;
  if (key == "heat") return ProblemKind::heat;
  throw ArgumentError("unknown problem '" + std::string(name) + "'");
}

SplitSystem make_problem(const ProblemSpec& spec) {
  SplitSystem sys;
  switch (spec.kind) {
    case ProblemKind::parabolic:
      sys = make_semilinear_parabolic(spec.grid);
      break;
    case ProblemKind::allen_cahn:
      sys = make_allen_cahn(spec.param, spec.grid);
      break;
    case ProblemKind::schnakenberg:
      sys = make_schnakenberg(spec.param, spec.grid);
      break;
    case ProblemKind::heat:
      sys = make_linear_heat(spec.grid);
      break;
  }
  if (spec.t_end) sys.t_end = *spec.t_end;
  return sys;
}

GmresConfig default_gmres_config(ProblemKind kind) {
  GmresConfig cfg;
  cfg.tol = 1e-12;
  cfg.restart = kind == ProblemKind::schnakenberg ? 20 : 10;
  cfg.max_iters = 500;
  return cfg;
}

double fit_slope(std::span<const double> h, std::span<const double> error) {
  if (h.size() != error.size()) throw ArgumentError("fit_slope: length mismatch");
  if (h.size() < 2) throw ArgumentError("fit_slope: need at least two points");
  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(error[i] > 0.0)) throw ArgumentError("fit_slope: values must be positive");
    sx += std::log2(h[i]);
    sy += std::log2(error[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log2(h[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log2(error[i]) - my);
  }
  if (sxx == 0.0) throw ArgumentError("fit_slope: all step sizes are equal");
  return sxy / sxx;
}

namespace {

IntegratorConfig make_config(const SplitSystem& sys, IntegratorKind kind, double h,
                             bool preconditioned, const StudyOptions& opts) {
  IntegratorConfig cfg;
  cfg.kind = kind;
  cfg.h = h;
  cfg.t0 = sys.t0;
  cfg.t_end = sys.t_end;
  cfg.gmres = opts.gmres;
  cfg.krylov = opts.krylov;
  cfg.use_preconditioner = preconditioned;
  return cfg;
}

std::optional<double> problem_param(const ProblemSpec& p) {
  if (p.kind == ProblemKind::allen_cahn || p.kind == ProblemKind::schnakenberg) return p.param;
  return std::nullopt;
}

void progress(const StudyOptions& opts, const StudyRecord& r) {
  if (!opts.progress) return;
  *opts.progress << "[" << r.problem << "] " << r.method << " h=" << format_real(r.h)
                 << (r.preconditioned ? " ic0" : " noprec") << " -> " << to_string(r.outcome);
  if (r.error_max_norm) *opts.progress << " err=" << format_real(*r.error_max_norm);
  *opts.progress << " work=" << r.total_work() << '\n';
}

double method_rank(const std::string& name, std::span<const IntegratorKind> methods) {
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (to_string(methods[i]) == name) return static_cast<double>(i);
  }
  return static_cast<double>(methods.size());
}

// Order-stable: method (as listed), then h descending, then unpreconditioned first.
void sort_records(std::vector<StudyRecord>& records, std::span<const IntegratorKind> methods) {
  std::stable_sort(records.begin(), records.end(), [&](const StudyRecord& a, const StudyRecord& b) {
    const double ra = method_rank(a.method, methods);
    const double rb = method_rank(b.method, methods);
    if (ra != rb) return ra < rb;
    if (a.h != b.h) return a.h > b.h;
    return a.preconditioned < b.preconditioned;
  });
}

// Finest-step states that set the reference error scale. The primary
// method's own finest run only measures self-convergence, so it counts only
// when nothing else succeeded.
std::vector<Vector> scale_states(const std::vector<StudyRecord>& records, const std::vector<Vector>& finals,
                                 double h_min, IntegratorKind primary) {
  std::vector<Vector> others, own;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (records[k].h != h_min || records[k].outcome != Outcome::ok) continue;
    (records[k].method == to_string(primary) ? own : others).push_back(finals[k]);
  }
  return others.empty() ? own : others;
}

}  // namespace

StudyRecord run_single(const SplitSystem& sys, const ProblemSpec& problem, IntegratorKind method,
                       double h, bool preconditioned, const StudyOptions& opts,
                       const Vector* reference, Vector* final_state) {
  StudyRecord r;
  r.problem = sys.label;
  r.method = std::string(to_string(method));
  r.h = h;
  r.grid = problem.grid;
  r.param = problem_param(problem);
  r.preconditioned = preconditioned;

  const IntegratorConfig cfg = make_config(sys, method, h, preconditioned, opts);
  const WorkCounters before = thread_counters();
  const auto start = std::chrono::steady_clock::now();
  try {
    IntegrationResult res = integrate(sys, cfg, sys.initial);
    r.outcome = Outcome::ok;
    if (reference) r.error_max_norm = max_diff(res.final_state, *reference);
    if (final_state) *final_state = std::move(res.final_state);
  } catch (const BlowUpError&) {
    r.outcome = Outcome::unstable;
  } catch (const ConvergenceError&) {
    r.outcome = Outcome::solver_fail;
  }
  const WorkCounters work = thread_counters() - before;
  r.spmv_count = work.spmv;
  r.gmres_iters = work.gmres_iters;
  r.krylov_matvecs = work.krylov_matvecs;
  r.n_evals = work.n_evals;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ReferenceSolution compute_reference(const SplitSystem& sys, const ReferencePolicy& policy,
                                    const IntegratorConfig& base, double h_min,
                                    std::span<const Vector> finest_states) {
  ReferenceSolution ref;
  if (policy.strategy == ReferenceStrategy::exact_solution) {
    if (!sys.has_exact()) throw ArgumentError(sys.label + ": no exact solution available");
    ref.state = sys.exact(base.t_end);
    return ref;
  }
  if (finest_states.empty()) {
    throw ArgumentError("compute_reference: fine-step strategy needs the finest study states");
  }
  if (policy.refinement == 0) throw ArgumentError("compute_reference: refinement must be positive");

  std::size_t refinement = policy.refinement;
  for (std::size_t attempt = 0; attempt <= policy.max_escalations; ++attempt, refinement *= 2) {
    IntegratorConfig cfg = base;
    cfg.h = h_min / static_cast<double>(refinement);
    Vector primary, cross;
    try {
      cfg.kind = policy.primary;
      primary = integrate(sys, cfg, sys.initial).final_state;
      cfg.kind = policy.cross_check;
      cross = integrate(sys, cfg, sys.initial).final_state;
    } catch (const std::runtime_error& e) {
      throw ReferenceError(sys.label + ": reference run failed at h = " + format_real(cfg.h) +
                           ": " + e.what());
    }
    double scale = std::numeric_limits<double>::infinity();
    for (const auto& s : finest_states) {
      if (s.size() == primary.size()) scale = std::min(scale, max_diff(s, primary));
    }
    const double diff = max_diff(primary, cross);
    ref.state = std::move(primary);
    ref.refinement = refinement;
    ref.cross_difference = diff;
    ref.error_scale = scale;
    if (diff * policy.agreement_factor <= scale) return ref;
  }
  throw ReferenceError(sys.label + ": reference methods disagree (" + format_real(ref.cross_difference) +
                       ") beyond 1/" + format_real(policy.agreement_factor) +
                       " of the finest study error (" + format_real(ref.error_scale) +
                       ") after " + std::to_string(policy.max_escalations) + " escalations");
}

ConvergenceStudy run_convergence_study(const ProblemSpec& problem,
                                       std::span<const IntegratorKind> methods, double h1,
                                       std::size_t n_halvings, const StudyOptions& opts) {
  if (n_halvings < 2) throw ArgumentError("run_convergence_study: need at least 2 halvings");
  if (!(h1 > 0.0)) throw ArgumentError("run_convergence_study: h1 must be positive");
  ConvergenceStudy study;
  if (methods.empty()) return study;

  const SplitSystem sys = make_problem(problem);
  std::vector<double> hs;
  for (std::size_t i = 0; i <= n_halvings; ++i) hs.push_back(std::ldexp(h1, -static_cast<int>(i)));
  const double h_min = hs.back();

  // The exact solution is preferred whenever the problem provides one.
  std::optional<Vector> exact_ref;
  if (sys.has_exact()) {
    exact_ref = sys.exact(sys.t_end);
  } else if (opts.reference.strategy == ReferenceStrategy::exact_solution) {
    throw ArgumentError(sys.label + ": no exact solution available");
  }

  std::vector<Vector> finals(methods.size() * hs.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t i = 0; i < hs.size(); ++i) {
      Vector* out = &finals[m * hs.size() + i];
      auto rec = run_single(sys, problem, methods[m], hs[i], opts.preconditioned, opts,
                            exact_ref ? &*exact_ref : nullptr, out);
      progress(opts, rec);
      study.records.push_back(std::move(rec));
    }
  }

  if (!exact_ref) {
    const std::vector<Vector> finest = scale_states(study.records, finals, h_min, opts.reference.primary);
    if (finest.empty()) throw ReferenceError(sys.label + ": no study run succeeded at h_min");
    const IntegratorConfig base = make_config(sys, opts.reference.primary, h_min, opts.preconditioned, opts);
    if (opts.progress) {
      *opts.progress << "[" << sys.label << "] reference: " << to_string(opts.reference.primary) << " vs "
                     << to_string(opts.reference.cross_check) << " at h_min/"
                     << opts.reference.refinement << '\n';
    }
    study.reference = compute_reference(sys, opts.reference, base, h_min, finest);
    if (opts.progress) {
      *opts.progress << "[" << sys.label << "] reference accepted at h_min/" << study.reference->refinement
                     << ", cross difference " << format_real(study.reference->cross_difference) << '\n';
    }
    for (std::size_t k = 0; k < study.records.size(); ++k) {
      auto& rec = study.records[k];
      if (rec.outcome == Outcome::ok) rec.error_max_norm = max_diff(finals[k], study.reference->state);
      progress(opts, rec);
    }
  }

  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<double> h_ok, e_ok;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const auto& rec = study.records[m * hs.size() + i];
      if (rec.outcome == Outcome::ok && rec.error_max_norm && *rec.error_max_norm > 0.0) {
        h_ok.push_back(rec.h);
        e_ok.push_back(*rec.error_max_norm);
      }
    }
    SlopeFit fit{std::string(to_string(methods[m])), std::numeric_limits<double>::quiet_NaN(), h_ok.size()};
    if (h_ok.size() >= 2) fit.slope = fit_slope(h_ok, e_ok);
    study.slopes.push_back(fit);
  }
  sort_records(study.records, methods);
  return study;
}

StabilityScan run_stability_scan(const ProblemSpec& problem, IntegratorKind method,
                                 std::span<const double> h_grid, const StudyOptions& opts) {
  for (std::size_t i = 1; i < h_grid.size(); ++i) {
    if (!(h_grid[i] < h_grid[i - 1])) throw ArgumentError("run_stability_scan: h grid must be descending");
  }
  StabilityScan scan;
  const SplitSystem sys = make_problem(problem);
  std::optional<Vector> exact_ref;
  if (sys.has_exact()) exact_ref = sys.exact(sys.t_end);
  for (double h : h_grid) {
    auto rec = run_single(sys, problem, method, h, opts.preconditioned, opts,
                          exact_ref ? &*exact_ref : nullptr);
    progress(opts, rec);
    const bool ok = rec.outcome == Outcome::ok;
    scan.records.push_back(std::move(rec));
    if (ok) {
      scan.largest_stable = h;
      break;
    }
  }
  return scan;
}

std::vector<StudyRecord> run_precision_study(const ProblemSpec& problem,
                                             std::span<const IntegratorKind> methods,
                                             std::span<const double> h_grid,
                                             std::span<const bool> precond_flags,
                                             const StudyOptions& opts) {
  std::vector<StudyRecord> records;
  if (methods.empty() || h_grid.empty() || precond_flags.empty()) return records;
  const SplitSystem sys = make_problem(problem);
  const double h_min = *std::min_element(h_grid.begin(), h_grid.end());

  std::vector<Vector> finals;
  for (IntegratorKind m : methods) {
    for (double h : h_grid) {
      for (bool pc : precond_flags) {
        finals.emplace_back();
        records.push_back(run_single(sys, problem, m, h, pc, opts, nullptr, &finals.back()));
        progress(opts, records.back());
      }
    }
  }

  Vector reference;
  if (sys.has_exact()) {
    reference = sys.exact(sys.t_end);
  } else {
    const std::vector<Vector> finest = scale_states(records, finals, h_min, opts.reference.primary);
    if (finest.empty()) throw ReferenceError(sys.label + ": no precision run succeeded at h_min");
    const IntegratorConfig base =
        make_config(sys, opts.reference.primary, h_min, opts.preconditioned, opts);
    reference = compute_reference(sys, opts.reference, base, h_min, finest).state;
  }
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (records[k].outcome == Outcome::ok) records[k].error_max_norm = max_diff(finals[k], reference);
    progress(opts, records[k]);
  }
  sort_records(records, methods);
  return records;
}

}  // namespace imexp
