#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imexp {

enum class Outcome { ok, unstable, solver_fail };

std::string_view to_string(Outcome o) noexcept;
Outcome parse_outcome(std::string_view s);

/// One integration run of a study.
struct StudyRecord {
  std::string problem;
  std::string method;
  double h = 0.0;
  std::size_t grid = 0;
  std::optional<double> param;  ///< gamma or eps; empty for the 1D problems
  bool preconditioned = false;
  std::optional<double> error_max_norm;  ///< only for outcome == ok
  std::uint64_t spmv_count = 0;
  std::uint64_t gmres_iters = 0;
  std::uint64_t krylov_matvecs = 0;
  std::uint64_t n_evals = 0;
  double wall_seconds = 0.0;
  Outcome outcome = Outcome::ok;

  /// spmv + GMRES iterations + Krylov matvecs.
  std::uint64_t total_work() const noexcept { return spmv_count + gmres_iters + krylov_matvecs; }

  friend bool operator==(const StudyRecord&, const StudyRecord&) = default;
};

/// Column order of the CSV files, also the header row.
inline constexpr std::string_view kCsvHeader =
    "problem,method,h,grid,param,preconditioned,error_max_norm,spmv_count,gmres_iters,"
    "krylov_matvecs,n_evals,wall_seconds,outcome";

/// Shortest decimal string that parses back to exactly x.
std::string format_real(double x);

void write_csv(std::ostream& os, const std::vector<StudyRecord>& records);
std::vector<StudyRecord> parse_csv(std::istream& is);

/// Writes the CSV file; throws IoError naming the path on failure.
void emit_csv(const std::vector<StudyRecord>& records, const std::filesystem::path& path);
std::vector<StudyRecord> read_csv(const std::filesystem::path& path);

}  // namespace imexp
