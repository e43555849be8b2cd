#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>

#include "imexp/sparse_matrix.hpp"

namespace imexp {

/// Action v -> A v of a square operator, either backed by a CsrMatrix or a
/// closure (matrix-free Jacobians). Cheap to copy; shares its backing.
class LinearOperator {
 public:
  using Apply = std::function<void(std::span<const double>, std::span<double>)>;

  LinearOperator() = default;
  LinearOperator(std::size_t n, Apply apply) : n_(n), apply_(std::move(apply)) {}

  static LinearOperator from_matrix(std::shared_ptr<const CsrMatrix> a);
  static LinearOperator from_matrix(const CsrMatrix& a);
  /// The zero operator of dimension n.
  static LinearOperator zero(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  /// y = A x; throws ArgumentError on length mismatch.
  void apply(std::span<const double> x, std::span<double> y) const;
  Vector operator()(std::span<const double> x) const;

  /// Returns the operator x -> factor * A x.
  LinearOperator scaled(double factor) const;

 private:
  std::size_t n_ = 0;
  Apply apply_;
};

}  // namespace imexp
