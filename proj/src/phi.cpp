#include "imexp/phi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imexp/errors.hpp"

namespace imexp {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_order(int k) {
  if (k < 0 || k > kMaxPhiOrder) {
    throw ArgumentError("phi order must lie in [0, " + std::to_string(kMaxPhiOrder) +
                        "], got " + std::to_string(k));
  }
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw CapacityError("dense phi evaluation of dimension " + std::to_string(n) +
                        " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

double phi_scalar(int k, double z) {
  check_order(k);
  if (k == 0) return std::exp(z);
  if (std::abs(z) < 0.5) {
    // sum_j z^j / (j+k)!; terms shrink at least by 2x per index here.
    double term = 1.0 / factorial(k);
    double sum = term;
    for (int j = 1; j < 40; ++j) {
      term *= z / static_cast<double>(j + k);
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  double phi = std::exp(z);
  for (int j = 1; j <= k; ++j) phi = (phi - 1.0 / factorial(j - 1)) / z;
  return phi;
}

DenseMatrix phi_matrix(int k, const DenseMatrix& m, std::size_t cap) {
  check_order(k);
  const std::size_t n = m.rows();
  if (m.cols() != n) throw ArgumentError("phi_matrix: matrix is not square");
  check_cap(n, cap);
  if (k == 0) return expm(m);

  const std::size_t blocks = static_cast<std::size_t>(k) + 1;
  DenseMatrix aug(n * blocks, n * blocks);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
  }
  for (std::size_t b = 0; b + 1 < blocks; ++b) {
    for (std::size_t i = 0; i < n; ++i) aug(b * n + i, (b + 1) * n + i) = 1.0;
  }
  return expm(aug).block(0, static_cast<std::size_t>(k) * n, n, n);
}

Vector phi_linear_combination(const DenseMatrix& m, std::span<const Vector> b,
                              std::size_t cap) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw ArgumentError("phi_linear_combination: matrix is not square");
  if (b.empty()) throw ArgumentError("phi_linear_combination: need at least b_0");
  const int k = static_cast<int>(b.size()) - 1;
  check_order(k);
  check_cap(n, cap);
  for (const auto& bj : b) {
    if (bj.size() != n) throw ArgumentError("phi_linear_combination: vector length mismatch");
  }

  // Columns of W are b_k, ..., b_1, scaled by eta so the coupling block is
  // comparable to the unit vector it multiplies.
  double wmax = 0.0;
  for (int j = 1; j <= k; ++j) wmax = std::max(wmax, max_norm(b[static_cast<std::size_t>(j)]));
  const double eta = wmax > 0.0 ? 1.0 / wmax : 1.0;

  const std::size_t kk = static_cast<std::size_t>(k);
  DenseMatrix aug(n + kk, n + kk);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    for (std::size_t c = 0; c < kk; ++c) aug(i, n + c) = eta * b[kk - c][i];
  }
  for (std::size_t c = 0; c + 1 < kk; ++c) aug(n + c, n + c + 1) = 1.0;

  const DenseMatrix e = expm(aug);
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += e(i, j) * b[0][j];
    if (kk > 0) s += e(i, n + kk - 1) / eta;
    out[i] = s;
  }
  return out;
}

}  // namespace imexp
