#include "cqd/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqd/errors.hpp"
#include "cqd/quadrature.hpp"

namespace cqd::barrier {
namespace {

// sin(y)/y and sinh(y)/y with the removable singularity filled in.
double sinc(double y) {
  if (std::abs(y) < 1e-8) return 1.0 - y * y / 6.0;
  return std::sin(y) / y;
}

double sinhc(double y) {
  if (std::abs(y) < 1e-8) return 1.0 + y * y / 6.0;
  return std::sinh(y) / y;
}

}  // namespace

BarrierPotential::BarrierPotential(double v0_, double length_) : v0(v0_), length(length_) {
  if (!(v0 > 0) || !(length > 0))
    throw ValidationError("barrier: V0 and L must be positive");
}

GaussianEnsemble::GaussianEnsemble(double alpha_, double xbar_, double kbar_)
    : alpha(alpha_), xbar(xbar_), kbar(kbar_) {
  if (!(alpha > 0)) throw ValidationError("ensemble: alpha must be positive");
}

double potential(const BarrierPotential& v, double x) {
  return (x >= 0.0 && x <= v.length) ? v.v0 : 0.0;
}

double smeared_potential(const BarrierPotential& v, double alpha, double xbar) {
  if (!(alpha > 0)) throw ValidationError("smeared_potential: alpha must be positive");
  const double s = std::sqrt(alpha);
  return 0.5 * v.v0 * (std::erf((v.length - xbar) / s) + std::erf(xbar / s));
}

double smeared_potential_derivative(const BarrierPotential& v, double alpha, double xbar) {
  if (!(alpha > 0)) throw ValidationError("smeared_potential: alpha must be positive");
  const double inv_spi = 1.0 / std::sqrt(alpha * std::numbers::pi);
  const double a = xbar * xbar / alpha;
  const double b = (v.length - xbar) * (v.length - xbar) / alpha;
  return v.v0 * inv_spi * (std::exp(-a) - std::exp(-b));
}

double effective_hamiltonian(const BarrierPotential& v, double alpha, double x, double k) {
  return k * k + 0.5 / alpha + smeared_potential(v, alpha, x);
}

double t_ideal(double k) { return k > 1.0 ? 1.0 : 0.0; }

double t_classical_avg(double alpha, double kbar) {
  if (!(alpha > 0)) throw ValidationError("t_classical_avg: alpha must be positive");
  return 0.5 * std::erfc(std::sqrt(alpha) * (1.0 - kbar));
}

double t_quantum(double k, const BarrierPotential& v, TransmissionFormula formula) {
  if (!(k > 0)) return 0.0;
  const double L = v.length;
  const double k2 = k * k;

  if (formula == TransmissionFormula::kPrintedLinear) {
    // Literal printed form with argument 2L(k^2 - 1); not a valid physical
    // transmission coefficient, retained for the oracle falsification run.
    const double num = 8.0 * k2 * (k2 - 1.0);
    const double osc = (k2 >= 1.0) ? std::cos(2.0 * L * (k2 - 1.0))
                                   : std::cosh(2.0 * L * (1.0 - k2));
    const double den = num + 1.0 - osc;
    if (den == 0.0) return 1.0;
    return num / den;
  }

  // T = 4 k^2 q^2 / (4 k^2 q^2 + sin^2(qL)) above threshold (q^2 = k^2 - 1)
  // and the sinh analogue below; written through sinc so the k -> 1 limit
  // 4k^2/(4k^2 + L^2) is exact on the guard band.
  double osc_sq;  // sin^2(qL)/q^2 or sinh^2(qL)/q^2, as L^2 * (shape)^2
  if (std::abs(k - 1.0) < 1e-6) {
    osc_sq = L * L;
  } else if (k > 1.0) {
    const double q = std::sqrt(k2 - 1.0);
    const double s = sinc(q * L);
    osc_sq = L * L * s * s;
  } else {
    const double q = std::sqrt(1.0 - k2);
    if (q * L > 350.0) return 0.0;  // sinh overflow: transmission underflows
    const double s = sinhc(q * L);
    osc_sq = L * L * s * s;
  }
  return 4.0 * k2 / (4.0 * k2 + osc_sq);
}

double t_quantum_avg(double alpha, double kbar, const BarrierPotential& v,
                     TransmissionFormula formula, double abs_tol) {
  if (!(alpha > 0)) throw ValidationError("t_quantum_avg: alpha must be positive");
  const double half_width = 8.0 / std::sqrt(2.0 * alpha);
  const double lo = std::max(kbar - half_width, 0.0);
  const double hi = kbar + half_width;
  if (hi <= lo) return 0.0;

  const double norm = std::sqrt(alpha / std::numbers::pi);
  auto integrand = [&](double k) {
    const double d = k - kbar;
    return t_quantum(k, v, formula) * norm * std::exp(-alpha * d * d);
  };
  return quadrature::integrate(integrand, lo, hi, abs_tol).value;
}

TransmissionMode transmission_mode_from_string(const std::string& name) {
  if (name == "icm") return TransmissionMode::kIdealClassical;
  if (name == "cm") return TransmissionMode::kClassicalAvg;
  if (name == "qm") return TransmissionMode::kQuantum;
  if (name == "qm_avg") return TransmissionMode::kQuantumAvg;
  throw ValidationError("unknown transmission mode: " + name);
}

std::string to_string(TransmissionMode mode) {
  switch (mode) {
    case TransmissionMode::kIdealClassical: return "icm";
    case TransmissionMode::kClassicalAvg: return "cm";
    case TransmissionMode::kQuantum: return "qm";
    case TransmissionMode::kQuantumAvg: return "qm_avg";
  }
  return "?";
}

std::vector<CurvePoint> transmission_curve(TransmissionMode mode, double alpha,
                                           const std::vector<double>& k_grid,
                                           const BarrierPotential& v) {
  for (size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 0) || (i > 0 && k_grid[i] <= k_grid[i - 1]))
      throw ValidationError("transmission_curve: k grid must be strictly increasing and positive");
  }
  std::vector<CurvePoint> out;
  out.reserve(k_grid.size());
  for (double k : k_grid) {
    double t = 0.0;
    switch (mode) {
      case TransmissionMode::kIdealClassical: t = t_ideal(k); break;
      case TransmissionMode::kClassicalAvg: t = t_classical_avg(alpha, k); break;
      case TransmissionMode::kQuantum: t = t_quantum(k, v); break;
      case TransmissionMode::kQuantumAvg: t = t_quantum_avg(alpha, k, v); break;
    }
    out.push_back({k, t});
  }
  return out;
}

}  // namespace cqd::barrier
