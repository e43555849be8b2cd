#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imexp/dense.hpp"
#include "imexp/vector_ops.hpp"

namespace imexp {

/// Highest phi index any routine accepts.
inline constexpr int kMaxPhiOrder = 4;
/// Largest dense dimension accepted by phi_matrix / phi_linear_combination.
inline constexpr std::size_t kDenseCap = 400;

/// phi_0(z) = e^z, phi_k(z) = int_0^1 e^{(1-s)z} s^{k-1}/(k-1)! ds.
/// Taylor series for |z| < 0.5, the recurrence
/// phi_k(z) = (phi_{k-1}(z) - 1/(k-1)!) / z above it.
double phi_scalar(int k, double z);

/// phi_k(M) for a small dense square M, read off the exponential of the
/// block matrix [[M, I, 0..], [0, 0, I ..], ..., [0 .. 0]].
DenseMatrix phi_matrix(int k, const DenseMatrix& m, std::size_t cap = kDenseCap);

/// sum_{j=0}^{k} phi_j(M) b_j with k = b.size() - 1, from one exponential of
/// the (n+k)-dimensional augmented matrix [[M, W], [0, J]].
Vector phi_linear_combination(const DenseMatrix& m, std::span<const Vector> b,
                              std::size_t cap = kDenseCap);

}  // namespace imexp
