#pragma once

#include <span>

#include "imexp/sparse_matrix.hpp"

namespace imexp {

/// Zero-fill incomplete Cholesky factor A ~ L L^T. The factor keeps exactly
/// the lower-triangle sparsity of the source matrix.
class IcFactor {
 public:
  explicit IcFactor(CsrMatrix lower);

  const CsrMatrix& lower() const noexcept { return lower_; }
  std::size_t size() const noexcept { return lower_.rows(); }

  /// z = (L L^T)^{-1} r
  Vector apply(std::span<const double> r) const;
  /// In place: r <- L^{-1} r
  void solve_lower(std::span<double> r) const;
  /// In place: r <- L^{-T} r
  void solve_upper(std::span<double> r) const;

 private:
  CsrMatrix lower_;
};

/// IC(0) of a symmetric matrix with positive diagonal. Only the lower
/// triangle of A is read. Throws FactorizationError on a nonpositive pivot.
IcFactor ichol_zero_fill(const CsrMatrix& a);

inline Vector apply_preconditioner(const IcFactor& f, std::span<const double> r) {
  return f.apply(r);
}

}  // namespace imexp
