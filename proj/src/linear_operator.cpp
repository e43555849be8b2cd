#include "imexp/linear_operator.hpp"

#include <algorithm>
#include <string>

#include "imexp/errors.hpp"

namespace imexp {

LinearOperator LinearOperator::from_matrix(std::shared_ptr<const CsrMatrix> a) {
  if (!a || !a->square()) throw ArgumentError("LinearOperator: matrix must be square");
  const std::size_t n = a->rows();
  return LinearOperator(n, [a = std::move(a)](std::span<const double> x, std::span<double> y) {
    spmv(*a, x, y);
  });
}

LinearOperator LinearOperator::from_matrix(const CsrMatrix& a) {
  return from_matrix(std::make_shared<const CsrMatrix>(a));
}

LinearOperator LinearOperator::zero(std::size_t n) {
  return LinearOperator(n, [](std::span<const double>, std::span<double> y) {
    std::fill(y.begin(), y.end(), 0.0);
  });
}

void LinearOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw ArgumentError("LinearOperator: dimension mismatch (operator " + std::to_string(n_) +
                        ", vectors " + std::to_string(x.size()) + "/" +
                        std::to_string(y.size()) + ")");
  }
  apply_(x, y);
}

Vector LinearOperator::operator()(std::span<const double> x) const {
  Vector y(n_);
  apply(x, y);
  return y;
}

LinearOperator LinearOperator::scaled(double factor) const {
  return LinearOperator(n_, [inner = apply_, factor](std::span<const double> x,
                                                     std::span<double> y) {
    inner(x, y);
    for (double& v : y) v *= factor;
  });
}

}  // namespace imexp
