#pragma once

#include <functional>

namespace cqd::quadrature {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b] to an
// absolute tolerance.  Intervals are bisected until the local K15-G7
// error estimate is below the tolerance share of the interval.
// Throws NumericalError with diagnostics if the interval budget is
// exhausted before convergence.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9, int max_intervals = 4096);

}  // namespace cqd::quadrature
