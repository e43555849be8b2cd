#include "imexp/arnoldi.hpp"

#include "imexp/errors.hpp"

namespace imexp {

ArnoldiProcess::ArnoldiProcess(const LinearOperator& a, std::size_t max_steps)
    : op_(a), max_steps_(max_steps), hess_(max_steps + 1, max_steps) {
  if (max_steps == 0) throw ArgumentError("ArnoldiProcess: max_steps must be positive");
  basis_.reserve(max_steps + 1);
}

double ArnoldiProcess::start(std::span<const double> v) {
  if (v.size() != op_.size()) throw ArgumentError("ArnoldiProcess: start vector length mismatch");
  const double beta = norm2(v);
  if (!(beta > 0.0)) throw ArgumentError("ArnoldiProcess: start vector is zero");
  steps_ = 0;
  breakdown_ = false;
  basis_.clear();
  std::fill(hess_.data().begin(), hess_.data().end(), 0.0);
  basis_.emplace_back(v.begin(), v.end());
  scale(1.0 / beta, basis_.back());
  return beta;
}

bool ArnoldiProcess::extend() {
  if (breakdown_ || steps_ >= max_steps_ || basis_.empty()) return false;
  const std::size_t j = steps_;
  Vector w = op_(basis_[j]);
  const double wnorm = norm2(w);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i <= j; ++i) {
      const double c = dot(basis_[i], w);
      hess_(i, j) += c;
      axpy(-c, basis_[i], std::span<double>(w));
    }
  }
  const double hnext = norm2(w);
  ++steps_;
  if (hnext <= kBreakdownTol * wnorm || hnext == 0.0) {
    hess_(j + 1, j) = 0.0;
    breakdown_ = true;
    return true;
  }
  hess_(j + 1, j) = hnext;
  scale(1.0 / hnext, w);
  basis_.push_back(std::move(w));
  return true;
}

DenseMatrix ArnoldiProcess::square_hessenberg() const {
  return hess_.block(0, 0, steps_, steps_);
}

DenseMatrix ArnoldiProcess::hessenberg() const {
  return hess_.block(0, 0, steps_ + 1, steps_);
}

ArnoldiResult arnoldi(const LinearOperator& a, std::span<const double> v, std::size_t m) {
  ArnoldiProcess proc(a, m);
  proc.start(v);
  while (proc.extend()) {
  }
  ArnoldiResult r;
  r.basis = proc.basis();
  r.hessenberg = proc.hessenberg();
  r.steps = proc.steps();
  r.breakdown = proc.breakdown();
  return r;
}

}  // namespace imexp
