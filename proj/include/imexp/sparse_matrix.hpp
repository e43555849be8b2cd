#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "imexp/vector_ops.hpp"

namespace imexp {

/// One (row, col, value) entry used when assembling a CsrMatrix.
struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix in canonical form: column indices strictly
/// increasing within each row. Immutable after construction.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Takes raw CSR arrays; throws ArgumentError unless they are canonical.
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> vals);

  /// Duplicate entries are summed. Explicit zeros are kept so callers can
  /// reserve structural positions (e.g. diagonals).
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                 std::vector<Triplet> entries);
  static CsrMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return vals_.size(); }
  bool square() const noexcept { return rows_ == cols_; }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return vals_; }

  /// Entry lookup by binary search; 0 if not stored.
  double at(std::size_t i, std::size_t j) const;

  CsrMatrix transpose() const;
  /// Dense row-major copy; debugging and test oracles only.
  std::vector<double> to_dense() const;

  /// max_i sum_j |a_ij|
  double norm_inf() const noexcept;
  /// max_j sum_i |a_ij|
  double norm_one() const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> vals_;
};

/// y = A x. Counts one spmv on the calling thread's WorkCounters.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
Vector spmv(const CsrMatrix& a, std::span<const double> x);

/// Returns I - alpha * A with a stored diagonal entry in every row.
CsrMatrix shift_identity(const CsrMatrix& a, double alpha);

/// Block-diagonal assembly diag(s_0 * A_0, s_1 * A_1, ...).
CsrMatrix block_diagonal(std::span<const CsrMatrix> blocks,
                         std::span<const double> scales);

/// Matrix Market coordinate real general format.
void write_matrix_market(std::ostream& os, const CsrMatrix& a);
CsrMatrix read_matrix_market(std::istream& is);

}  // namespace imexp
