#pragma once

#include <span>
#include <vector>

namespace imexp {

using Vector = std::vector<double>;

// All kernels throw ArgumentError on length mismatch.

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// Returns a * x + y without modifying the inputs.
Vector axpy(double a, const Vector& x, const Vector& y);
void scale(double a, std::span<double> x) noexcept;
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x) noexcept;
/// Discrete infinity norm, max_i |x_i|.
double max_norm(std::span<const double> x) noexcept;
/// max_i |x_i - y_i|
double max_diff(std::span<const double> x, std::span<const double> y);
bool all_finite(std::span<const double> x) noexcept;

}  // namespace imexp
