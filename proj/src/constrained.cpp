#include "cqd/constrained.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>

#include "cqd/errors.hpp"
#include "cqd/ode.hpp"

namespace cqd::constrained {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

SymplecticRestriction form_restriction(const CoherentFamily& family, const VectorXd& z,
                                       double rel_threshold) {
  if (z.size() != family.n_params())
    throw ValidationError("form_restriction: parameter dimension mismatch");
  const MatrixXcd overlaps = family.tangent_overlaps(z);
  if (overlaps.rows() != family.n_params() || overlaps.cols() != family.n_params())
    throw ValidationError("form_restriction: overlap matrix has wrong shape");
  const double herm = (overlaps - overlaps.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw ValidationError("form_restriction: overlap matrix not Hermitian, residual " +
                          std::to_string(herm));

  SymplecticRestriction out;
  out.sigma = -2.0 * overlaps.imag();
  out.sigma = 0.5 * (out.sigma - out.sigma.transpose().eval());  // exact antisymmetry

  Eigen::JacobiSVD<MatrixXd> svd(out.sigma, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = (sv.size() > 0 && sv[0] > 0) ? rel_threshold * sv[0] : 0.0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++out.rank;
  out.degenerate = out.rank < family.n_params();
  if (out.degenerate)
    out.kernel = svd.matrixV().rightCols(family.n_params() - out.rank);
  return out;
}

namespace {

VectorXd invert_form(const SymplecticRestriction& r, const VectorXd& rhs) {
  if (r.degenerate)
    throw DegenerateFormError(
        "non-symplectic manifold: restricted form has rank " + std::to_string(r.rank) +
            " < " + std::to_string(r.sigma.rows()) +
            "; constrained equations of motion are not defined (use the "
            "projection path / gauge averaging instead)",
        r.rank, r.kernel);
  return r.sigma.partialPivLu().solve(rhs);
}

}  // namespace

VectorXd eom_rhs(const CoherentFamily& family, const VectorXd& z) {
  const SymplecticRestriction r = form_restriction(family, z);
  return invert_form(r, family.energy_gradient(z));
}

double bracket_on_family(const CoherentFamily& family, const Observable& f,
                         const Observable& g, const VectorXd& z) {
  const SymplecticRestriction r = form_restriction(family, z);
  const VectorXd gf = f.gradient(z);
  const VectorXd gg = g.gradient(z);
  if (gf.size() != family.n_params() || gg.size() != family.n_params())
    throw ValidationError("bracket_on_family: gradient dimension mismatch");
  return gf.dot(invert_form(r, gg));
}

Trajectory integrate(const CoherentFamily& family, const VectorXd& z0, double t_span,
                     double tol, const std::vector<double>& sample_times) {
  if (!(t_span > 0)) throw ValidationError("integrate: t_span must be positive");

  auto rhs = [&family](double, const VectorXd& z) { return eom_rhs(family, z); };

  ode::Options opts;
  opts.tol = tol;

  double last_t = 0.0;
  VectorXd last_z = z0;
  auto observer = [&](double t, const VectorXd& z) {
    last_t = t;
    last_z = z;
  };

  ode::Solution sol;
  try {
    sol = ode::integrate(rhs, z0, 0.0, t_span, opts, sample_times, nullptr, observer);
  } catch (const DegenerateFormError& e) {
    std::string msg = std::string(e.what()) + "; last valid state at t = " +
                      std::to_string(last_t) + ": [";
    for (int i = 0; i < last_z.size(); ++i)
      msg += (i ? ", " : "") + std::to_string(last_z[i]);
    msg += "]";
    throw DegenerateFormError(msg, e.rank, e.kernel);
  }

  Trajectory traj;
  traj.times = std::move(sol.times);
  traj.states = std::move(sol.states);
  traj.energies.reserve(traj.states.size());
  const double e0 = family.energy(z0);
  const double bound = 100.0 * tol * t_span;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const double e = family.energy(traj.states[i]);
    traj.energies.push_back(e);
    if (std::abs(e - e0) > bound)
      throw NumericalError("integrate: energy drift " + std::to_string(std::abs(e - e0)) +
                           " exceeds bound " + std::to_string(bound) + " at t = " +
                           std::to_string(traj.times[i]));
  }
  return traj;
}

// ---------------------------------------------------------------------------

GaussianPacketFamily::GaussianPacketFamily(double alpha, const barrier::BarrierPotential& v)
    : alpha_(alpha), barrier_(v) {
  if (!(alpha > 0)) throw ValidationError("GaussianPacketFamily: alpha must be positive");
}

MatrixXcd GaussianPacketFamily::tangent_overlaps(const VectorXd& z) const {
  // <d_xbar|d_xbar> = 1/(2 alpha), <d_xbar|d_kbar> = i/2,
  // <d_kbar|d_kbar> = xbar^2 + alpha/2  (closed Gaussian moments)
  const double xbar = z[0];
  MatrixXcd o(2, 2);
  o(0, 0) = 0.5 / alpha_;
  o(0, 1) = std::complex<double>(0.0, 0.5);
  o(1, 0) = std::complex<double>(0.0, -0.5);
  o(1, 1) = xbar * xbar + 0.5 * alpha_;
  return o;
}

double GaussianPacketFamily::energy(const VectorXd& z) const {
  return barrier::effective_hamiltonian(barrier_, alpha_, z[0], z[1]);
}

VectorXd GaussianPacketFamily::energy_gradient(const VectorXd& z) const {
  VectorXd g(2);
  g[0] = barrier::smeared_potential_derivative(barrier_, alpha_, z[0]);
  g[1] = 2.0 * z[1];
  return g;
}

LiePoissonFamily::LiePoissonFamily(algebra::StructureConstants sc,
                                   std::function<double(const VectorXd&)> hamiltonian,
                                   std::function<VectorXd(const VectorXd&)> gradient)
    : sc_(std::move(sc)), h_(std::move(hamiltonian)), grad_h_(std::move(gradient)) {}

MatrixXcd LiePoissonFamily::tangent_overlaps(const VectorXd& z) const {
  // Encode sigma(rho) as a purely imaginary Hermitian overlap matrix so that
  // -2 Im(overlaps) reproduces the Lie-Poisson form.
  const MatrixXd sigma = algebra::poisson_matrix(sc_, z);
  return std::complex<double>(0.0, -0.5) * sigma.cast<std::complex<double>>();
}

double LiePoissonFamily::energy(const VectorXd& z) const { return h_(z); }

VectorXd LiePoissonFamily::energy_gradient(const VectorXd& z) const { return grad_h_(z); }

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_trajectory_csv: cannot open " + path);
  out << "t,xbar,kbar,H\n";
  char buf[160];
  for (size_t i = 0; i < trajectory.times.size(); ++i) {
    if (trajectory.states[i].size() != 2)
      throw ValidationError("write_trajectory_csv: expects two-parameter states");
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", trajectory.times[i],
                  trajectory.states[i][0], trajectory.states[i][1],
                  trajectory.energies[i]);
    out << buf;
  }
}

int constrained_transmission(double alpha, double kbar, const barrier::BarrierPotential& v,
                             double tol) {
  const double xbar0 = -10.0 * std::sqrt(alpha) - 10.0;
  const double transmit_at = v.length + 10.0 * std::sqrt(alpha) + 10.0;
  GaussianPacketFamily family(alpha, v);

  VectorXd z(2);
  z << xbar0, kbar;

  // One scattering pass: distance scale / asymptotic speed, with slack for
  // slowing near the smeared top.
  const double span = (transmit_at - xbar0) / std::max(2.0 * std::abs(kbar), 1e-3);
  const double t_max = 200.0 * std::max(span, 1.0);

  ode::Options opts;
  opts.tol = tol;
  auto rhs = [&family](double, const VectorXd& s) { return eom_rhs(family, s); };

  double t = 0.0;
  const double chunk = std::max(span / 64.0, 1e-2);
  while (t < t_max) {
    ode::Solution leg = ode::integrate(rhs, z, t, t + chunk, opts);
    for (size_t i = 0; i < leg.states.size(); ++i) {
      const VectorXd& s = leg.states[i];
      if (s[0] > transmit_at) return 1;
      if (s[0] < xbar0 && s[1] < 0.0) return 0;
    }
    z = leg.states.back();
    t += chunk;
  }
  throw NumericalError("constrained_transmission: no verdict before t = " +
                       std::to_string(t_max) + " (kbar = " + std::to_string(kbar) + ")");
}

}  // namespace cqd::constrained
