// imexp_bench: convergence studies, stability scans and precision diagrams
// for the IMEXP integrators. Records go to CSV (stdout when --out is absent),
// progress to stderr.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imexp/csv.hpp"
#include "imexp/errors.hpp"
#include "imexp/integrators.hpp"
#include "imexp/study.hpp"

using namespace imexp;

namespace {

struct Options {
  std::string problem = "parabolic";
  std::vector<std::string> methods;
  std::optional<double> h1;
  std::size_t halvings = 4;
  std::vector<double> h_grid;
  std::optional<std::size_t> grid;
  double gamma = 1000.0;
  double eps = 0.02;
  std::optional<double> t_end;
  std::string precond = "on";
  std::optional<double> gmres_tol;
  std::optional<std::size_t> gmres_restart;
  std::optional<double> krylov_tol;
  std::string cross_check;
  std::string out;
  std::uint64_t seed = 0;  // reserved
};

ProblemSpec problem_spec(const Options& o) {
  ProblemSpec spec;
  spec.kind = parse_problem_kind(o.problem);
  if (spec.kind == ProblemKind::heat) throw ArgumentError("unknown problem 'heat'");
  spec.grid = o.grid.value_or(spec.kind == ProblemKind::parabolic ? 200 : 64);
  if (spec.kind == ProblemKind::allen_cahn) spec.param = o.eps;
  if (spec.kind == ProblemKind::schnakenberg) spec.param = o.gamma;
  spec.t_end = o.t_end;
  return spec;
}

StudyOptions study_options(const Options& o, ProblemKind kind) {
  StudyOptions s;
  s.gmres = default_gmres_config(kind);
  if (o.gmres_tol) s.gmres.tol = *o.gmres_tol;
  if (o.gmres_restart) s.gmres.restart = *o.gmres_restart;
  if (o.krylov_tol) s.krylov.tol = *o.krylov_tol;
  if (!o.cross_check.empty()) s.reference.cross_check = parse_integrator_kind(o.cross_check);
  s.progress = &std::cerr;
  return s;
}

std::vector<IntegratorKind> methods(const Options& o, std::vector<IntegratorKind> fallback) {
  if (o.methods.empty()) return fallback;
  std::vector<IntegratorKind> out;
  for (const auto& m : o.methods) out.push_back(parse_integrator_kind(m));
  return out;
}

std::vector<bool> precond_flags(const std::string& p) {
  if (p == "on") return {true};
  if (p == "off") return {false};
  return {true, false};
}

double default_h1(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::allen_cahn:
      return 2.5e-4;
    case ProblemKind::schnakenberg:
      return 3.125e-4;
    default:
      return 0.1;
  }
}

std::vector<double> halving_grid(double h1, std::size_t halvings) {
  std::vector<double> h;
  for (std::size_t i = 0; i <= halvings; ++i) h.push_back(h1 / static_cast<double>(std::size_t{1} << i));
  return h;
}

const std::vector<IntegratorKind> kAll = {IntegratorKind::imexp_rk1, IntegratorKind::imexp_rk2,
                                          IntegratorKind::himexp2j, IntegratorKind::himexp2n,
                                          IntegratorKind::sbdf2};

void emit(const std::vector<StudyRecord>& records, const std::string& out) {
  if (out.empty())
    write_csv(std::cout, records);
  else
    emit_csv(records, out);
}

bool any_failure(const std::vector<StudyRecord>& records) {
  return std::any_of(records.begin(), records.end(),
                     [](const StudyRecord& r) { return r.outcome == Outcome::solver_fail; });
}

int converge(const Options& o) {
  const ProblemSpec spec = problem_spec(o);
  const auto ms = methods(o, kAll);
  std::vector<StudyRecord> records;
  for (bool pc : precond_flags(o.precond)) {
    StudyOptions s = study_options(o, spec.kind);
    s.preconditioned = pc;
    const ConvergenceStudy study =
        run_convergence_study(spec, ms, o.h1.value_or(default_h1(spec.kind)), o.halvings, s);
    for (const auto& f : study.slopes)
      std::cerr << "slope " << f.method << (pc ? "" : " (no precond)") << ": " << f.slope << " over " << f.points
                << " points\n";
    records.insert(records.end(), study.records.begin(), study.records.end());
  }
  emit(records, o.out);
  return any_failure(records) ? 1 : 0;
}

int stability(const Options& o) {
  const ProblemSpec spec = problem_spec(o);
  std::vector<double> grid = o.h_grid;
  if (grid.empty()) grid = {1e-2, 5e-3, 1e-3, 5e-4, 1e-4, 5e-5, 1e-5};
  std::vector<StudyRecord> records;
  for (bool pc : precond_flags(o.precond)) {
    StudyOptions s = study_options(o, spec.kind);
    s.preconditioned = pc;
    for (IntegratorKind m : methods(o, {IntegratorKind::himexp2j, IntegratorKind::sbdf2})) {
      const StabilityScan scan = run_stability_scan(spec, m, grid, s);
      std::cerr << "largest stable h " << to_string(m) << (pc ? "" : " (no precond)") << ": ";
      if (scan.largest_stable)
        std::cerr << *scan.largest_stable << "\n";
      else
        std::cerr << "none\n";
      records.insert(records.end(), scan.records.begin(), scan.records.end());
    }
  }
  emit(records, o.out);
  return any_failure(records) ? 1 : 0;
}

int precision(const Options& o) {
  const ProblemSpec spec = problem_spec(o);
  std::vector<double> grid = o.h_grid;
  if (grid.empty()) grid = halving_grid(o.h1.value_or(default_h1(spec.kind)), o.halvings);
  const std::vector<bool> flags = precond_flags(o.precond);
  bool buf[2] = {};
  std::copy(flags.begin(), flags.end(), buf);
  const auto records = run_precision_study(spec, methods(o, kAll), grid, std::span<const bool>(buf, flags.size()),
                                           study_options(o, spec.kind));
  emit(records, o.out);
  return any_failure(records) ? 1 : 0;
}

int run(const Options& o) {
  const ProblemSpec spec = problem_spec(o);
  const SplitSystem sys = make_problem(spec);
  const double h = o.h1.value_or(default_h1(spec.kind));
  std::optional<Vector> exact;
  if (sys.has_exact()) exact = sys.exact(sys.t_end);
  std::vector<StudyRecord> records;
  for (bool pc : precond_flags(o.precond)) {
    const StudyOptions s = study_options(o, spec.kind);
    for (IntegratorKind m : methods(o, {IntegratorKind::himexp2j})) {
      const StudyRecord& r = records.emplace_back(run_single(sys, spec, m, h, pc, s, exact ? &*exact : nullptr));
      std::cerr << r.method << " h=" << r.h << (pc ? "" : " (no precond)") << ": " << to_string(r.outcome);
      if (r.error_max_norm) std::cerr << ", error " << *r.error_max_norm;
      std::cerr << ", " << r.wall_seconds << " s\n";
    }
  }
  emit(records, o.out);
  return any_failure(records) ? 1 : 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--problem", o.problem, "parabolic | allencahn | schnakenberg")
      ->check(CLI::IsMember({"parabolic", "allencahn", "schnakenberg"}));
  sub->add_option("--method", o.methods, "ImExpRK1, ImExpRK2, HImExp2J, HImExp2N, 2-sBDF (repeatable)");
  sub->add_option("--h1", o.h1, "largest step (step size for 'run')")->check(CLI::PositiveNumber);
  sub->add_option("--halvings", o.halvings, "number of step halvings")->check(CLI::Range(0, 30));
  sub->add_option("--step", o.h_grid, "explicit step grid, descending (stability, precision)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--grid", o.grid, "interior nodes (1D) or cells per axis (2D)")->check(CLI::Range(2, 100000));
  sub->add_option("--gamma", o.gamma, "Schnakenberg gamma")->check(CLI::PositiveNumber);
  sub->add_option("--eps", o.eps, "Allen-Cahn epsilon")->check(CLI::PositiveNumber);
  sub->add_option("--t-end", o.t_end, "final time")->check(CLI::PositiveNumber);
  sub->add_option("--precond", o.precond, "IC(0) preconditioning: on | off | both")
      ->check(CLI::IsMember({"on", "off", "both"}));
  sub->add_option("--gmres-tol", o.gmres_tol, "GMRES relative tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--gmres-restart", o.gmres_restart, "GMRES restart length")->check(CLI::Range(1, 10000));
  sub->add_option("--krylov-tol", o.krylov_tol, "phi Krylov tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--cross-check", o.cross_check, "reference cross-check method");
  sub->add_option("--out", o.out, "CSV output path (default stdout)");
  sub->add_option("--seed", o.seed, "reserved; studies are deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMEXP integrator benchmarks"};
  app.require_subcommand(1);
  Options o;
  auto* conv = app.add_subcommand("converge", "convergence study: error vs h, fitted slopes");
  auto* stab = app.add_subcommand("stability", "largest stable step on a descending grid");
  auto* prec = app.add_subcommand("precision", "error vs work, with and without preconditioning");
  auto* single = app.add_subcommand("run", "one run per method at step --h1");
  for (auto* sub : {conv, stab, prec, single}) add_common(sub, o);
  prec->get_option("--precond")->default_str("both");
  o.precond = "";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (o.precond.empty()) o.precond = prec->parsed() ? "both" : "on";

  try {
    if (conv->parsed()) return converge(o);
    if (stab->parsed()) return stability(o);
    if (prec->parsed()) return precision(o);
    return run(o);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ReferenceError& e) {
    std::cerr << "reference failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
