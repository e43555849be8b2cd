#include "imexp/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "imexp/errors.hpp"

namespace imexp {

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::ok:
      return "ok";
    case Outcome::unstable:
      return "unstable";
    case Outcome::solver_fail:
      return "solver_fail";
  }
  return "?";
}

Outcome parse_outcome(std::string_view s) {
  if (s == "ok") return Outcome::ok;
  if (s == "unstable") return Outcome::unstable;
  if (s == "solver_fail") return Outcome::solver_fail;
  throw ArgumentError("unknown outcome '" + std::string(s) + "'");
}

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_real(std::string_view s, const char* field) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ArgumentError(std::string("csv: bad real in ") + field + ": '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view s, const char* field) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ArgumentError(std::string("csv: bad count in ") + field + ": '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> parse_optional_real(std::string_view s, const char* field) {
  if (s.empty()) return std::nullopt;
  return parse_real(s, field);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<StudyRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.problem << ',' << r.method << ',' << format_real(r.h) << ',' << r.grid << ','
       << (r.param ? format_real(*r.param) : "") << ',' << (r.preconditioned ? 1 : 0) << ','
       << (r.error_max_norm ? format_real(*r.error_max_norm) : "") << ',' << r.spmv_count << ','
       << r.gmres_iters << ',' << r.krylov_matvecs << ',' << r.n_evals << ','
       << format_real(r.wall_seconds) << ',' << to_string(r.outcome) << '\n';
  }
}

std::vector<StudyRecord> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw ArgumentError("csv: missing or unexpected header");
  }
  std::vector<StudyRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 13) {
      throw ArgumentError("csv: expected 13 fields, got " + std::to_string(f.size()));
    }
    StudyRecord r;
    r.problem = std::string(f[0]);
    r.method = std::string(f[1]);
    r.h = parse_real(f[2], "h");
    r.grid = static_cast<std::size_t>(parse_count(f[3], "grid"));
    r.param = parse_optional_real(f[4], "param");
    if (f[5] != "0" && f[5] != "1") throw ArgumentError("csv: bad preconditioned flag");
    r.preconditioned = f[5] == "1";
    r.error_max_norm = parse_optional_real(f[6], "error_max_norm");
    r.spmv_count = parse_count(f[7], "spmv_count");
    r.gmres_iters = parse_count(f[8], "gmres_iters");
    r.krylov_matvecs = parse_count(f[9], "krylov_matvecs");
    r.n_evals = parse_count(f[10], "n_evals");
    r.wall_seconds = parse_real(f[11], "wall_seconds");
    r.outcome = parse_outcome(f[12]);
    out.push_back(std::move(r));
  }
  return out;
}

void emit_csv(const std::vector<StudyRecord>& records, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(os, records);
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<StudyRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_csv(is);
}

}  // namespace imexp
