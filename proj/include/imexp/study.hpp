#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imexp/csv.hpp"
#include "imexp/integrators.hpp"
#include "imexp/problems.hpp"

namespace imexp {

enum class ProblemKind { parabolic, allen_cahn, schnakenberg, heat };

std::string_view to_string(ProblemKind kind) noexcept;
ProblemKind parse_problem_kind(std::string_view name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::parabolic;
  /// Interior nodes (1D) or cells per axis (2D).
  std::size_t grid = 200;
  /// eps for Allen-Cahn, gamma for Schnakenberg; ignored otherwise.
  double param = 0.0;
  /// Overrides the problem's default horizon when set.
  std::optional<double> t_end;
};

SplitSystem make_problem(const ProblemSpec& spec);

/// GMRES settings used for a problem unless overridden: tolerance 1e-12,
/// restart 10 (20 for Schnakenberg), at most 500 iterations.
GmresConfig default_gmres_config(ProblemKind kind);

enum class ReferenceStrategy { exact_solution, fine_step_cross_method };

struct ReferencePolicy {
  ReferenceStrategy strategy = ReferenceStrategy::fine_step_cross_method;
  /// Reference step is h_min / refinement; doubles on each escalation.
  std::size_t refinement = 16;
  IntegratorKind primary = IntegratorKind::himexp2j;
  IntegratorKind cross_check = IntegratorKind::imexp_rk2;
  std::size_t max_escalations = 3;
  /// The two reference runs must agree to finest_error / agreement_factor.
  double agreement_factor = 100.0;
};

struct ReferenceSolution {
  Vector state;
  std::size_t refinement = 0;   ///< 0 for the exact strategy
  double cross_difference = 0.0;
  double error_scale = 0.0;     ///< smallest finest-step study error
};

/// Solver settings shared by every run of a study.
struct StudyOptions {
  GmresConfig gmres;
  KrylovConfig krylov;
  bool preconditioned = true;
  ReferencePolicy reference;
  std::ostream* progress = nullptr;
};

/// Reference state at the end of the horizon. For the fine-step strategy,
/// finest_states are the study's solutions at h_min; the smallest max-norm
/// distance of those to the primary reference sets the agreement bar.
/// Throws ReferenceError when the runs fail or never agree.
ReferenceSolution compute_reference(const SplitSystem& sys, const ReferencePolicy& policy,
                                    const IntegratorConfig& base, double h_min,
                                    std::span<const Vector> finest_states);

struct SlopeFit {
  std::string method;
  double slope = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of log2(error) against log2(h). Needs two distinct h.
double fit_slope(std::span<const double> h, std::span<const double> error);

struct ConvergenceStudy {
  std::vector<StudyRecord> records;
  std::vector<SlopeFit> slopes;  ///< one per method, NaN when < 2 ok points
  std::optional<ReferenceSolution> reference;
};

/// Runs every method at h1 / 2^i, i = 0..n_halvings, and measures the
/// max-norm error at t_end against the exact solution (when the problem has
/// one) or a fine-step reference. Failed runs are recorded, never thrown.
ConvergenceStudy run_convergence_study(const ProblemSpec& problem,
                                       std::span<const IntegratorKind> methods, double h1,
                                       std::size_t n_halvings, const StudyOptions& opts = {});

struct StabilityScan {
  std::optional<double> largest_stable;  ///< empty: none stable
  std::vector<StudyRecord> records;
};

/// Walks a descending step grid and stops at the first h whose run completes.
StabilityScan run_stability_scan(const ProblemSpec& problem, IntegratorKind method,
                                 std::span<const double> h_grid, const StudyOptions& opts = {});

/// Error and work for every (method, h, preconditioner flag) combination.
std::vector<StudyRecord> run_precision_study(const ProblemSpec& problem,
                                             std::span<const IntegratorKind> methods,
                                             std::span<const double> h_grid,
                                             std::span<const bool> precond_flags,
                                             const StudyOptions& opts = {});

/// One run turned into a record; error filled when `reference` is given and
/// the run succeeded. The final state is returned through `final_state`.
StudyRecord run_single(const SplitSystem& sys, const ProblemSpec& problem, IntegratorKind method,
                       double h, bool preconditioned, const StudyOptions& opts,
                       const Vector* reference, Vector* final_state = nullptr);

}  // namespace imexp
