#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace imexp {

/// Bad dimensions, out-of-range parameters, malformed grids.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dense kernel was asked for a matrix larger than its configured cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Incomplete Cholesky hit a nonpositive pivot.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, std::size_t row)
      : std::runtime_error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// An iterative method (GMRES, Krylov phi evaluation) gave up.
/// Carries the best iterate found so callers can inspect or reuse it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best,
                   double residual, std::size_t iterations)
      : std::runtime_error(what),
        best_(std::move(best)),
        residual_(residual),
        iterations_(iterations) {}

  const std::vector<double>& best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> best_;
  double residual_;
  std::size_t iterations_;
};

/// The solution left the finite/bounded regime during time integration.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::size_t step, double t)
      : std::runtime_error(what), step_(step), t_(t) {}
  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return t_; }

 private:
  std::size_t step_;
  double t_;
};

/// A reference solution could not be certified.
class ReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace imexp
