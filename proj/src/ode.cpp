#include "cqd/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cqd/errors.hpp"

namespace cqd::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order weights for the error estimate.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double tol) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    norm += r * r;
  }
  return std::sqrt(norm / static_cast<double>(err.size()));
}

}  // namespace

Solution integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                   const Options& opts, const std::vector<double>& sample_times,
                   const StepPostprocess& postprocess, const StepObserver& observer) {
  if (!(t1 > t0)) throw ValidationError("ode: t1 must exceed t0");
  if (!(opts.tol > 0)) throw ValidationError("ode: tol must be positive");
  for (size_t i = 0; i < sample_times.size(); ++i) {
    const double s = sample_times[i];
    if (s < t0 || s > t1 || (i > 0 && s <= sample_times[i - 1]))
      throw ValidationError("ode: sample_times must be strictly increasing within [t0, t1]");
  }

  const bool record_all = sample_times.empty();
  size_t next_sample = 0;

  Solution sol;
  Eigen::VectorXd y = y0;
  double t = t0;

  Eigen::VectorXd k1 = rhs(t, y);
  bool k1_fresh = true;

  // Controller's preferred step size, independent of clipping to targets.
  double h_ctrl = opts.h_initial;
  if (h_ctrl <= 0) {
    const double dnorm = k1.norm();
    h_ctrl = (dnorm > 0) ? std::min(0.01 * (1.0 + y.norm()) / dnorm, (t1 - t0) / 10)
                         : (t1 - t0) / 100;
    h_ctrl = std::max(h_ctrl, 16 * opts.h_min);
  }
  if (opts.h_max > 0) h_ctrl = std::min(h_ctrl, opts.h_max);

  auto record = [&](double time, const Eigen::VectorXd& state) {
    sol.times.push_back(time);
    sol.states.push_back(state);
  };

  if (record_all) record(t, y);
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
    record(t, y);
    ++next_sample;
  }

  long steps = 0;
  while (t < t1) {
    if (++steps > opts.max_steps)
      throw NumericalError("ode: step budget exhausted at t = " + std::to_string(t));

    double target = t1;
    if (next_sample < sample_times.size())
      target = std::min(target, sample_times[next_sample]);

    // A gap below time resolution is arrival, not stiffness.
    const double snap_tol = std::max(
        opts.h_min, 8.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::abs(t), std::abs(target)));
    if (target - t <= snap_tol) {
      t = target;
      if (record_all) {
        record(t, y);
      } else {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
          record(t, y);
          ++next_sample;
        }
      }
      continue;
    }

    const bool clipped = h_ctrl >= target - t;
    const double h = clipped ? target - t : h_ctrl;
    if (h < opts.h_min)
      throw NumericalError("ode: step size underflow (stiff region?) at t = " +
                           std::to_string(t));

    if (!k1_fresh) {
      k1 = rhs(t, y);
      k1_fresh = true;
    }

    const Eigen::VectorXd k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Eigen::VectorXd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 =
        rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 =
        rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::VectorXd y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = rhs(t + h, y5);
    const Eigen::VectorXd y4 =
        y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err = error_norm(y5 - y4, y, y5, opts.tol);

    if (err <= 1.0) {
      t = clipped ? target : t + h;
      y = std::move(y5);
      if (postprocess) {
        postprocess(t, y);
        k1_fresh = false;  // FSAL derivative no longer matches the projected state
      } else {
        k1 = k7;
      }
      if (observer) observer(t, y);
      if (record_all) {
        record(t, y);
      } else {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
          record(t, y);
          ++next_sample;
        }
      }
    }
    // On rejection the state is unchanged, so k1 is still valid.

    double factor = (err > 0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    double proposal = h * factor;
    // Never let a clip-to-target shrink the controller's scale on success.
    if (err <= 1.0 && clipped) proposal = std::max(proposal, h_ctrl);
    h_ctrl = proposal;
    if (opts.h_max > 0) h_ctrl = std::min(h_ctrl, opts.h_max);
  }

  return sol;
}

}  // namespace cqd::ode
