#pragma once

#include <string>
#include <vector>

namespace cqd::barrier {

// Square barrier in units hbar^2/2m = 1, so a free particle of wave number k
// has energy k^2 and speed 2k.
struct BarrierPotential {
  double v0 = 1.0;
  double length = 8.0;

  BarrierPotential() = default;
  BarrierPotential(double v0_, double length_);
};

// Gaussian phase-space ensemble: position variance alpha/2, wave-number
// variance 1/(2 alpha).
struct GaussianEnsemble {
  double alpha;
  double xbar = 0.0;
  double kbar = 0.0;

  explicit GaussianEnsemble(double alpha_, double xbar_ = 0.0, double kbar_ = 0.0);
};

// V0 on the closed interval [0, L], zero outside.
double potential(const BarrierPotential& v, double x);

// Vbar_alpha(xbar) = (V0/2) [erf((L - xbar)/sqrt(alpha)) + erf(xbar/sqrt(alpha))]
double smeared_potential(const BarrierPotential& v, double alpha, double xbar);
double smeared_potential_derivative(const BarrierPotential& v, double alpha, double xbar);

// H_alpha(x, k) = k^2 + 1/(2 alpha) + Vbar_alpha(x); the constant is the
// kinetic zero point of the minimal packet.
double effective_hamiltonian(const BarrierPotential& v, double alpha, double x, double k);

// Ideal classical step: 1 above threshold, 0 below (and at k = 1).
double t_ideal(double k);

// Classical ensemble average: (1/2) erfc(sqrt(alpha) (1 - kbar)).
double t_classical_avg(double alpha, double kbar);

// Which argument the oscillatory factor of the stationary transmission
// coefficient uses.  SquareRoot is the physical reading (reduces to the
// textbook sinh form below threshold); PrintedLinear reproduces a
// dimensionally inconsistent variant kept solely so the validation suite can
// demonstrate that it fails against the time-dependent oracle.
enum class TransmissionFormula { kSquareRoot, kPrintedLinear };

// Stationary transmission through the square barrier at wave number k.
// Continuous across k = 1 with limit 4k^2/(4k^2 + L^2).
double t_quantum(double k, const BarrierPotential& v,
                 TransmissionFormula formula = TransmissionFormula::kSquareRoot);

// Quantal packet average: adaptive quadrature of t_quantum against the
// momentum distribution, window kbar +- 8/sqrt(2 alpha) truncated at k > 0.
double t_quantum_avg(double alpha, double kbar, const BarrierPotential& v,
                     TransmissionFormula formula = TransmissionFormula::kSquareRoot,
                     double abs_tol = 1e-9);

enum class TransmissionMode { kIdealClassical, kClassicalAvg, kQuantum, kQuantumAvg };

TransmissionMode transmission_mode_from_string(const std::string& name);
std::string to_string(TransmissionMode mode);

struct CurvePoint {
  double k;
  double t;
};

// Per-point application of the selected transmission family over a strictly
// increasing positive k grid.  alpha is ignored by the ideal and sharp-k
// quantum modes.
std::vector<CurvePoint> transmission_curve(TransmissionMode mode, double alpha,
                                           const std::vector<double>& k_grid,
                                           const BarrierPotential& v);

}  // namespace cqd::barrier
