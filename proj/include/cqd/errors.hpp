#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cqd {

// Bad arguments or violated type invariants (dimension mismatch, non-unitary
// matrix, weights not summing to 1, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to meet its contract (quadrature did not
// converge, step size underflow, energy drift beyond bound).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulation geometry is inadequate (packet support outside grid, mass
// reaching the domain edges).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The restricted two-form is singular at the requested point.  Carries the
// kernel so the caller can switch to the projection path instead of
// pseudo-inverting.
struct DegenerateFormError : std::runtime_error {
  DegenerateFormError(const std::string& what, int rank_, Eigen::MatrixXd kernel_)
      : std::runtime_error(what), rank(rank_), kernel(std::move(kernel_)) {}
  int rank;
  Eigen::MatrixXd kernel;  // columns span the null space
};

}  // namespace cqd
