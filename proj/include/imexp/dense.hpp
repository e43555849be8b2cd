#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace imexp {

/// Small row-major dense matrix. Used for Hessenberg matrices, augmented
/// exponentials and test oracles; never for the full PDE operators.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Leading block copy.
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  DenseMatrix& operator*=(double s) noexcept;
  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);

  double norm_one() const noexcept;
  double norm_frobenius() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);
std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x);

/// Solves A X = B by LU with partial pivoting. Throws ArgumentError if A is
/// numerically singular.
DenseMatrix lu_solve(DenseMatrix a, DenseMatrix b);

/// exp(A) by scaling and squaring with the degree-13 Pade approximant.
DenseMatrix expm(const DenseMatrix& a);

}  // namespace imexp
