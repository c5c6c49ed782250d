#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cqd/algebra.hpp"

namespace cqd::rotor {

// Principal moments of inertia.  An asymmetric top has all three distinct;
// equal pairs are accepted (symmetric-top fixtures) and reported by
// is_asymmetric().
struct IntrinsicMoments {
  double i1, i2, i3;

  IntrinsicMoments(double a, double b, double c);
  Eigen::Vector3d vec() const { return {i1, i2, i3}; }
  bool is_asymmetric(double rel_tol = 1e-12) const;
};

// Throws ValidationError unless R^T R = 1 and det R = +1 to tolerance.
void validate_orientation(const Eigen::Matrix3d& r, double tol = 1e-10);

// Nearest rotation matrix (polar projection via SVD).
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& r);

// Orientation Omega together with the body-frame angular momentum Lbar.
// Space-frame angular momentum is Omega^T * Lbar.
struct RotorState {
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d l_body = Eigen::Vector3d::Zero();
};

// Symmetric boost parameters Q of the coherent-state exponent.
struct BoostParameters {
  Eigen::Matrix3d q;
  explicit BoostParameters(const Eigen::Matrix3d& q_);
};

// Basis order of the rotor model algebra [R^6]so(3):
// (I_11, I_22, I_33, I_23, I_13, I_12, L_1, L_2, L_3).
inline constexpr int kRmaDim = 9;
algebra::StructureConstants rma_structure_constants();

// Index of the inertia component (i, j), i,j in {0,1,2}, in the RMA basis.
int rma_inertia_index(int i, int j);

// Inertia tensor at orientation Omega: Omega^T Ibar Omega.
Eigen::Matrix3d inertia_function(const IntrinsicMoments& moments, const Eigen::Matrix3d& r);

// Lbar_l(Q) = sum_ij Q_ij (Ibar_i - Ibar_j) eps_ijl; only off-diagonal Q
// contributes.
Eigen::Vector3d lbar_from_boost(const IntrinsicMoments& moments, const BoostParameters& q);

// H = (1/2) sum_m Lbar_m^2 / Ibar_m.
double classical_hamiltonian(const IntrinsicMoments& moments, const RotorState& state);

struct RotorDerivative {
  Eigen::Matrix3d orientation_dot;
  Eigen::Vector3d l_body_dot;
};

// Euler's equations: Lbar_dot = Lbar x omega_bar,
// Omega_dot = -skew(omega_bar) Omega, with omega_bar_m = Lbar_m / Ibar_m.
RotorDerivative euler_rhs(const IntrinsicMoments& moments, const RotorState& state);

struct RotorTrajectory {
  std::vector<double> times;
  std::vector<RotorState> states;
  std::vector<double> energies;
  std::vector<double> l_squared;
};

// Adaptive RK4(5) with polar re-orthonormalization of the orientation after
// every accepted step.  Conservation of H and |Lbar|^2 is enforced post-hoc
// to 100 * tol * t_span.
RotorTrajectory evolve_rotor(const IntrinsicMoments& moments, const RotorState& state0,
                             double t_span, double tol,
                             const std::vector<double>& sample_times = {});

// Embed a rotor state as a density over the RMA basis:
// rho = (I_11, I_22, I_33, I_23, I_13, I_12, L_1, L_2, L_3) with the inertia
// components at the state's orientation and L in the space frame.
algebra::Density embed_density(const IntrinsicMoments& moments, const RotorState& state);

// Space-frame Hamiltonian (1/2) L^T I(rho)^{-1} L of an embedded density and
// its analytic gradient (matrix-inverse derivative).  Near-degenerate inertia
// tensors (relative conditioning below 1e-8) are rejected.
double rma_hamiltonian(const algebra::Density& rho);
Eigen::VectorXd rma_hamiltonian_gradient(const algebra::Density& rho);

// Integrates the same initial condition twice -- body-frame Euler equations
// vs. the 9-dimensional Lie-Poisson flow of the embedded density -- and
// returns the maximum pointwise deviation between the embedded trajectories.
double lie_poisson_crosscheck(const IntrinsicMoments& moments, const RotorState& state0,
                              double t_span, double tol = 1e-12, int n_samples = 200);

struct OrbitGeometry {
  int manifold_dim = kRmaDim;
  int orbit_dim = 0;
  Eigen::MatrixXd kernel;                 // kernel basis of sigma at the reference density
  bool kernel_is_diagonal_moments = false;
  bool degenerate_moments = false;        // rank fell below 6 (equal moments)
};

// Rank/kernel of the Lie-Poisson form at rho(I = diag(Ibar), L = 0).
OrbitGeometry orbit_geometry_report(const IntrinsicMoments& moments);

}  // namespace cqd::rotor
