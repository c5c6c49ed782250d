#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace cqd::ode {

using Rhs = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& y)>;

// Invoked after each accepted step; may project the state back onto a
// constraint manifold (e.g. re-orthonormalize a rotation block).
using StepPostprocess = std::function<void(double t, Eigen::VectorXd& y)>;

// Read-only callback on each accepted step.
using StepObserver = std::function<void(double t, const Eigen::VectorXd& y)>;

struct Options {
  double tol = 1e-10;        // absolute and relative per-step tolerance
  double h_initial = 0.0;    // 0 = choose automatically
  double h_min = 1e-14;
  double h_max = 0.0;        // 0 = no cap
  long max_steps = 50'000'000;
};

struct Solution {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
};

// Embedded Dormand-Prince 5(4) pair with standard step control.  When
// sample_times is nonempty (strictly increasing, inside [t0, t1]) the
// integrator lands on each sample exactly and records only those points;
// otherwise every accepted step is recorded.  Throws NumericalError when
// the step size underflows.
Solution integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                   const Options& opts = {},
                   const std::vector<double>& sample_times = {},
                   const StepPostprocess& postprocess = nullptr,
                   const StepObserver& observer = nullptr);

}  // namespace cqd::ode
