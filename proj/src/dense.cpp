#include "imexp/dense.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "imexp/errors.hpp"

namespace imexp {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows_ * cols_) {
    throw ArgumentError("DenseMatrix: expected " + std::to_string(rows_ * cols_) +
                        " values, got " + std::to_string(data_.size()));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ArgumentError("DenseMatrix::block out of range");
  DenseMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("DenseMatrix +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("DenseMatrix -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

double DenseMatrix::norm_one() const noexcept {
  double m = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

double DenseMatrix::norm_frobenius() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ArgumentError("DenseMatrix *: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw ArgumentError("DenseMatrix * vector: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix lu_solve(DenseMatrix a, DenseMatrix b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw ArgumentError("lu_solve: shape mismatch");
  const std::size_t nrhs = b.cols();
  const double scale = std::max(a.norm_one(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    }
    if (std::abs(a(piv, k)) <= 1e-300 * scale || std::abs(a(piv, k)) == 0.0) {
      throw ArgumentError("lu_solve: matrix is singular");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < nrhs; ++j) std::swap(b(k, j), b(piv, j));
    }
    const double inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) * inv;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < nrhs; ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < nrhs; ++j) {
      double s = b(kk, j);
      for (std::size_t i = kk + 1; i < n; ++i) s -= a(kk, i) * b(i, j);
      b(kk, j) = s / a(kk, kk);
    }
  }
  return b;
}

DenseMatrix expm(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ArgumentError("expm: matrix is not square");
  if (n == 0) return a;

  // Pade(13,13) coefficients and the backward-error bound for that degree.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm = a.norm_one();
  if (!std::isfinite(norm)) throw ArgumentError("expm: non-finite matrix entries");
  int s = 0;
  if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  DenseMatrix x = a;
  if (s > 0) x *= std::ldexp(1.0, -s);

  const DenseMatrix ident = DenseMatrix::identity(n);
  const DenseMatrix x2 = x * x;
  const DenseMatrix x4 = x2 * x2;
  const DenseMatrix x6 = x4 * x2;

  DenseMatrix inner_u = b[13] * x6 + b[11] * x4 + b[9] * x2;
  DenseMatrix u = x6 * inner_u + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * ident;
  u = x * u;
  DenseMatrix inner_v = b[12] * x6 + b[10] * x4 + b[8] * x2;
  DenseMatrix v = x6 * inner_v + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * ident;

  DenseMatrix r = lu_solve(v - u, v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

}  // namespace imexp
