#include "cqd/quadrature.hpp"

#include <cmath>
#include <algorithm>
#include <string>
#include <vector>

#include "cqd/errors.hpp"

namespace cqd::quadrature {
namespace {

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights,
// with the embedded 7-point Gauss weights.  Values from QUADPACK dqk15.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;   // K15 estimate
  double error;   // |K15 - G7|
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    result_kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
  }

  Panel p;
  p.a = a;
  p.b = b;
  p.value = result_kronrod * half;
  p.error = std::abs((result_kronrod - result_gauss) * half);
  return p;
}

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_intervals) {
  if (!(abs_tol > 0)) throw ValidationError("quadrature: abs_tol must be positive");
  Result out;
  if (a == b) return out;

  // Totals are recomputed from the live panels each round rather than
  // updated incrementally; incremental sums lose everything when an early
  // panel carries a wildly overestimated error (near-singular integrands).
  std::vector<Panel> panels{evaluate_panel(f, a, b)};
  out.evaluations = 15;
  const PanelWorse heap_order{};

  for (;;) {
    double total_value = 0.0, total_error = 0.0;
    for (const Panel& p : panels) {
      total_value += p.value;
      total_error += p.error;
    }
    if (total_error <= abs_tol) {
      out.value = total_value;
      out.error_estimate = total_error;
      return out;
    }
    if (static_cast<int>(panels.size()) >= max_intervals) {
      throw NumericalError(
          "quadrature: no convergence over [" + std::to_string(a) + ", " +
          std::to_string(b) + "]: error estimate " + std::to_string(total_error) +
          " > tol " + std::to_string(abs_tol) + " with " +
          std::to_string(panels.size()) + " intervals");
    }

    std::pop_heap(panels.begin(), panels.end(), heap_order);
    const Panel worst = panels.back();
    panels.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw NumericalError("quadrature: interval underflow near x = " +
                           std::to_string(worst.a));
    }
    panels.push_back(evaluate_panel(f, worst.a, mid));
    std::push_heap(panels.begin(), panels.end(), heap_order);
    panels.push_back(evaluate_panel(f, mid, worst.b));
    std::push_heap(panels.begin(), panels.end(), heap_order);
    out.evaluations += 30;
  }
}

}  // namespace cqd::quadrature
