#include "imexp/vector_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imexp/errors.hpp"
#include "imexp/work_counters.hpp"

namespace imexp {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ArgumentError(std::string(op) + ": length mismatch (" + std::to_string(a) +
                        " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

WorkCounters& thread_counters() noexcept {
  thread_local WorkCounters counters;
  return counters;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_same_length(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector axpy(double a, const Vector& x, const Vector& y) {
  Vector out = y;
  axpy(a, std::span<const double>(x), std::span<double>(out));
  return out;
}

void scale(double a, std::span<double> x) noexcept {
  for (double& v : x) v *= a;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) noexcept {
  double ssq = 0.0;
  for (double v : x) ssq += v * v;
  // Plain sum is fine unless it under- or overflowed; redo it scaled then.
  if (ssq > 1e-280 && ssq < 1e280) return std::sqrt(ssq);
  if (ssq == 0.0 && std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) return 0.0;
  double scale_factor = 0.0;
  double scaled = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale_factor < a) {
      scaled = 1.0 + scaled * (scale_factor / a) * (scale_factor / a);
      scale_factor = a;
    } else {
      scaled += (a / scale_factor) * (a / scale_factor);
    }
  }
  return scale_factor * std::sqrt(scaled);
}

double max_norm(std::span<const double> x) noexcept {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double max_diff(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "max_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

bool all_finite(std::span<const double> x) noexcept {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace imexp
