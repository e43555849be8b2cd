#include "imexp/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "imexp/errors.hpp"
#include "imexp/work_counters.hpp"

namespace imexp {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> vals)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      vals_(std::move(vals)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != col_idx_.size() || col_idx_.size() != vals_.size()) {
    throw ArgumentError("CsrMatrix: inconsistent row_ptr/col_idx/vals sizes");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw ArgumentError("CsrMatrix: row_ptr decreases");
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= cols_) throw ArgumentError("CsrMatrix: column index out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw ArgumentError("CsrMatrix: column indices not strictly increasing in row " +
                            std::to_string(i));
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= rows || t.col >= cols) throw ArgumentError("from_triplets: index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> vals;
  col_idx.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (k > 0 && t.row == entries[k - 1].row && t.col == entries[k - 1].col) {
      vals.back() += t.value;
      continue;
    }
    col_idx.push_back(t.col);
    vals.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(vals));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<std::size_t> col_idx(n);
  for (std::size_t i = 0; i <= n; ++i) row_ptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) col_idx[i] = i;
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::vector<double>(n, 1.0));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw ArgumentError("CsrMatrix::at: index out of range");
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return vals_[static_cast<std::size_t>(it - col_idx_.begin())];
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      t.push_back({col_idx_[k], i, vals_[k]});
    }
  }
  return from_triplets(cols_, rows_, std::move(t));
}

std::vector<double> CsrMatrix::to_dense() const {
  std::vector<double> d(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      d[i * cols_ + col_idx_[k]] = vals_[k];
    }
  }
  return d;
}

double CsrMatrix::norm_inf() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += std::abs(vals_[k]);
    m = std::max(m, s);
  }
  return m;
}

double CsrMatrix::norm_one() const {
  std::vector<double> colsum(cols_, 0.0);
  for (std::size_t k = 0; k < nnz(); ++k) colsum[col_idx_[k]] += std::abs(vals_[k]);
  return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols() || y.size() != a.rows()) {
    throw ArgumentError("spmv: dimension mismatch (" + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " times " + std::to_string(x.size()) + ")");
  }
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += va[k] * x[ci[k]];
    y[i] = s;
  }
  ++thread_counters().spmv;
}

Vector spmv(const CsrMatrix& a, std::span<const double> x) {
  Vector y(a.rows());
  spmv(a, x, y);
  return y;
}

CsrMatrix shift_identity(const CsrMatrix& a, double alpha) {
  if (!a.square()) throw ArgumentError("shift_identity: matrix is not square");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + a.rows());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    t.push_back({i, i, 1.0});
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) t.push_back({i, ci[k], -alpha * va[k]});
  }
  return CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

CsrMatrix block_diagonal(std::span<const CsrMatrix> blocks, std::span<const double> scales) {
  if (blocks.size() != scales.size()) throw ArgumentError("block_diagonal: scale count mismatch");
  std::size_t rows = 0, cols = 0;
  std::vector<Triplet> t;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& m = blocks[b];
    const auto rp = m.row_ptr();
    const auto ci = m.col_idx();
    const auto va = m.values();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
        t.push_back({rows + i, cols + ci[k], scales[b] * va[k]});
      }
    }
    rows += m.rows();
    cols += m.cols();
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

void write_matrix_market(std::ostream& os, const CsrMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  os.precision(std::numeric_limits<double>::max_digits10);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      os << i + 1 << ' ' << ci[k] + 1 << ' ' << va[k] << '\n';
    }
  }
}

CsrMatrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0) {
    throw ArgumentError("read_matrix_market: unsupported header");
  }
  while (std::getline(is, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream dims(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(dims >> rows >> cols >> nnz)) throw ArgumentError("read_matrix_market: bad size line");
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v) || i == 0 || j == 0) {
      throw ArgumentError("read_matrix_market: bad entry " + std::to_string(k));
    }
    t.push_back({i - 1, j - 1, v});
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

}  // namespace imexp
