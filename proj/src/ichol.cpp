#include "imexp/ichol.hpp"

#include <cmath>
#include <string>

#include "imexp/errors.hpp"

namespace imexp {

IcFactor::IcFactor(CsrMatrix lower) : lower_(std::move(lower)) {
  if (!lower_.square()) throw ArgumentError("IcFactor: factor must be square");
  const auto rp = lower_.row_ptr();
  const auto ci = lower_.col_idx();
  const auto va = lower_.values();
  for (std::size_t i = 0; i < lower_.rows(); ++i) {
    // Canonical lower-triangular rows end with their diagonal.
    if (rp[i + 1] == rp[i] || ci[rp[i + 1] - 1] != i || !(va[rp[i + 1] - 1] > 0.0)) {
      throw ArgumentError("IcFactor: row " + std::to_string(i) +
                          " lacks a positive trailing diagonal");
    }
  }
}

void IcFactor::solve_lower(std::span<double> r) const {
  if (r.size() != size()) throw ArgumentError("IcFactor: dimension mismatch");
  const auto rp = lower_.row_ptr();
  const auto ci = lower_.col_idx();
  const auto va = lower_.values();
  for (std::size_t i = 0; i < size(); ++i) {
    double s = r[i];
    const std::size_t diag = rp[i + 1] - 1;
    for (std::size_t k = rp[i]; k < diag; ++k) s -= va[k] * r[ci[k]];
    r[i] = s / va[diag];
  }
}

void IcFactor::solve_upper(std::span<double> r) const {
  if (r.size() != size()) throw ArgumentError("IcFactor: dimension mismatch");
  const auto rp = lower_.row_ptr();
  const auto ci = lower_.col_idx();
  const auto va = lower_.values();
  for (std::size_t i = size(); i-- > 0;) {
    const std::size_t diag = rp[i + 1] - 1;
    r[i] /= va[diag];
    const double zi = r[i];
    for (std::size_t k = rp[i]; k < diag; ++k) r[ci[k]] -= va[k] * zi;
  }
}

Vector IcFactor::apply(std::span<const double> r) const {
  Vector z(r.begin(), r.end());
  solve_lower(z);
  solve_upper(z);
  return z;
}

IcFactor ichol_zero_fill(const CsrMatrix& a) {
  if (!a.square()) throw ArgumentError("ichol_zero_fill: matrix is not square");
  const std::size_t n = a.rows();
  const auto arp = a.row_ptr();
  const auto aci = a.col_idx();
  const auto ava = a.values();

  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> vals;
  col_idx.reserve(a.nnz() / 2 + n);
  vals.reserve(a.nnz() / 2 + n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row_start = col_idx.size();
    double diag = 0.0;
    bool has_diag = false;
    for (std::size_t q = arp[i]; q < arp[i + 1] && aci[q] <= i; ++q) {
      const std::size_t k = aci[q];
      if (k == i) {
        diag = ava[q];
        has_diag = true;
        break;
      }
      // L_ik = (A_ik - sum_{j<k} L_ij L_kj) / L_kk over the shared pattern.
      double s = ava[q];
      std::size_t pi = row_start;
      std::size_t pk = row_ptr[k];
      const std::size_t k_diag = row_ptr[k + 1] - 1;
      while (pi < col_idx.size() && pk < k_diag) {
        if (col_idx[pi] == col_idx[pk]) {
          s -= vals[pi] * vals[pk];
          ++pi;
          ++pk;
        } else if (col_idx[pi] < col_idx[pk]) {
          ++pi;
        } else {
          ++pk;
        }
      }
      col_idx.push_back(k);
      vals.push_back(s / vals[k_diag]);
    }
    double pivot = diag;
    for (std::size_t q = row_start; q < col_idx.size(); ++q) pivot -= vals[q] * vals[q];
    if (!has_diag || !(pivot > 0.0) || !std::isfinite(pivot)) {
      throw FactorizationError("ichol_zero_fill: nonpositive pivot " + std::to_string(pivot) +
                                   " at row " + std::to_string(i),
                               i);
    }
    col_idx.push_back(i);
    vals.push_back(std::sqrt(pivot));
    row_ptr[i + 1] = col_idx.size();
  }
  return IcFactor(CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::move(vals)));
}

}  // namespace imexp
