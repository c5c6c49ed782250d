#include "cqd/rotor.hpp"

#include <cmath>
#include <string>

#include "cqd/errors.hpp"
#include "cqd/ode.hpp"

namespace cqd::rotor {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

double levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  if ((i + 1) % 3 == j) return 1.0;  // cyclic (i, i+1, i+2)
  return -1.0;
}

// skew(v) u = v x u
Matrix3d skew(const Vector3d& v) {
  Matrix3d s;
  s << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
  return s;
}

VectorXd pack(const RotorState& s) {
  VectorXd y(12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y[3 * i + j] = s.orientation(i, j);
  y.segment<3>(9) = s.l_body;
  return y;
}

RotorState unpack(const VectorXd& y) {
  RotorState s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.orientation(i, j) = y[3 * i + j];
  s.l_body = y.segment<3>(9);
  return s;
}

}  // namespace

IntrinsicMoments::IntrinsicMoments(double a, double b, double c) : i1(a), i2(b), i3(c) {
  if (!(i1 > 0 && i2 > 0 && i3 > 0))
    throw ValidationError("moments of inertia must be positive");
}

bool IntrinsicMoments::is_asymmetric(double rel_tol) const {
  const double scale = std::max({i1, i2, i3});
  return std::abs(i1 - i2) > rel_tol * scale && std::abs(i2 - i3) > rel_tol * scale &&
         std::abs(i1 - i3) > rel_tol * scale;
}

void validate_orientation(const Matrix3d& r, double tol) {
  const double orth = (r.transpose() * r - Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (orth > tol)
    throw ValidationError("orientation: not orthogonal, residual " + std::to_string(orth));
  if (std::abs(r.determinant() - 1.0) > tol)
    throw ValidationError("orientation: determinant " + std::to_string(r.determinant()));
}

Matrix3d orthonormalize(const Matrix3d& r) {
  Eigen::JacobiSVD<Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3d out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0) {
    Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    out = u * svd.matrixV().transpose();
  }
  return out;
}

BoostParameters::BoostParameters(const Matrix3d& q_) : q(q_) {
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("boost parameters must be symmetric");
}

int rma_inertia_index(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == j) return i;            // I_11, I_22, I_33
  if (i == 1 && j == 2) return 3;  // I_23
  if (i == 0 && j == 2) return 4;  // I_13
  return 5;                        // I_12
}

algebra::StructureConstants rma_structure_constants() {
  std::vector<algebra::StructureConstants::Triplet> t;
  const int l_base = 6;

  // so(3) block: [L_i, L_j] = i eps_ijk L_k
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const double e = levi_civita(i, j, k);
        if (e != 0.0) t.push_back({l_base + i, l_base + j, l_base + k, e});
      }

  // [I_ij, L_k] = i sum_l (eps_lik I_lj + eps_ljk I_li); the R^6 block is
  // abelian.  Components are accumulated into the six symmetric-pair basis
  // elements, so each unordered pair (i, j), i < j, is visited once.
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const int a = rma_inertia_index(i, j);
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const double e1 = levi_civita(l, i, k);
          if (e1 != 0.0) {
            t.push_back({a, l_base + k, rma_inertia_index(l, j), e1});
            t.push_back({l_base + k, a, rma_inertia_index(l, j), -e1});
          }
          const double e2 = levi_civita(l, j, k);
          if (e2 != 0.0) {
            t.push_back({a, l_base + k, rma_inertia_index(l, i), e2});
            t.push_back({l_base + k, a, rma_inertia_index(l, i), -e2});
          }
        }
      }
    }

  return algebra::StructureConstants::from_triplets(kRmaDim, t);
}

Matrix3d inertia_function(const IntrinsicMoments& moments, const Matrix3d& r) {
  validate_orientation(r);
  return r.transpose() * moments.vec().asDiagonal() * r;
}

Vector3d lbar_from_boost(const IntrinsicMoments& moments, const BoostParameters& q) {
  const Vector3d ibar = moments.vec();
  Vector3d lbar = Vector3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l)
        lbar[l] += q.q(i, j) * (ibar[i] - ibar[j]) * levi_civita(i, j, l);
  return lbar;
}

double classical_hamiltonian(const IntrinsicMoments& moments, const RotorState& state) {
  const Vector3d ibar = moments.vec();
  return 0.5 * (state.l_body.array().square() / ibar.array()).sum();
}

RotorDerivative euler_rhs(const IntrinsicMoments& moments, const RotorState& state) {
  validate_orientation(state.orientation);
  const Vector3d omega_bar = state.l_body.cwiseQuotient(moments.vec());
  RotorDerivative d;
  d.l_body_dot = state.l_body.cross(omega_bar);
  d.orientation_dot = -skew(omega_bar) * state.orientation;
  return d;
}

RotorTrajectory evolve_rotor(const IntrinsicMoments& moments, const RotorState& state0,
                             double t_span, double tol,
                             const std::vector<double>& sample_times) {
  validate_orientation(state0.orientation);
  if (!(t_span > 0)) throw ValidationError("evolve_rotor: t_span must be positive");

  const Vector3d ibar = moments.vec();
  auto rhs = [&ibar](double, const VectorXd& y) {
    Matrix3d r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = y[3 * i + j];
    const Vector3d l = y.segment<3>(9);
    const Vector3d w = l.cwiseQuotient(ibar);
    const Matrix3d rdot = -skew(w) * r;
    VectorXd dy(12);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dy[3 * i + j] = rdot(i, j);
    dy.segment<3>(9) = l.cross(w);
    return dy;
  };

  auto project = [](double, VectorXd& y) {
    Matrix3d r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = y[3 * i + j];
    r = orthonormalize(r);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) y[3 * i + j] = r(i, j);
  };

  ode::Options opts;
  opts.tol = tol;
  const ode::Solution sol =
      ode::integrate(rhs, pack(state0), 0.0, t_span, opts, sample_times, project);

  RotorTrajectory traj;
  traj.times = sol.times;
  traj.states.reserve(sol.states.size());
  const double e0 = classical_hamiltonian(moments, state0);
  const double lsq0 = state0.l_body.squaredNorm();
  const double bound = 100.0 * tol * t_span;
  for (size_t i = 0; i < sol.states.size(); ++i) {
    RotorState s = unpack(sol.states[i]);
    const double e = classical_hamiltonian(moments, s);
    const double lsq = s.l_body.squaredNorm();
    if (std::abs(e - e0) > bound * std::max(1.0, std::abs(e0)))
      throw NumericalError("evolve_rotor: energy drift " + std::to_string(e - e0) +
                           " at t = " + std::to_string(sol.times[i]));
    if (std::abs(lsq - lsq0) > bound * std::max(1.0, lsq0))
      throw NumericalError("evolve_rotor: |L|^2 drift " + std::to_string(lsq - lsq0) +
                           " at t = " + std::to_string(sol.times[i]));
    traj.energies.push_back(e);
    traj.l_squared.push_back(lsq);
    traj.states.push_back(std::move(s));
  }
  return traj;
}

algebra::Density embed_density(const IntrinsicMoments& moments, const RotorState& state) {
  const Matrix3d inertia = inertia_function(moments, state.orientation);
  const Vector3d l_space = state.orientation.transpose() * state.l_body;
  algebra::Density rho(kRmaDim);
  rho[0] = inertia(0, 0);
  rho[1] = inertia(1, 1);
  rho[2] = inertia(2, 2);
  rho[3] = inertia(1, 2);
  rho[4] = inertia(0, 2);
  rho[5] = inertia(0, 1);
  rho.segment<3>(6) = l_space;
  return rho;
}

namespace {

Matrix3d inertia_from_density(const algebra::Density& rho) {
  Matrix3d m;
  m << rho[0], rho[5], rho[4], rho[5], rho[1], rho[3], rho[4], rho[3], rho[2];
  return m;
}

Matrix3d checked_inverse(const Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Matrix3d> es(m);
  const double emin = es.eigenvalues().cwiseAbs().minCoeff();
  const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
  if (emin < 1e-8 * emax)
    throw NumericalError("rma_hamiltonian: inertia tensor near-singular (relative "
                         "conditioning " + std::to_string(emin / emax) + ")");
  return m.inverse();
}

}  // namespace

double rma_hamiltonian(const algebra::Density& rho) {
  if (rho.size() != kRmaDim) throw ValidationError("rma_hamiltonian: need a 9-component density");
  const Vector3d l = rho.segment<3>(6);
  return 0.5 * l.dot(checked_inverse(inertia_from_density(rho)) * l);
}

VectorXd rma_hamiltonian_gradient(const algebra::Density& rho) {
  if (rho.size() != kRmaDim)
    throw ValidationError("rma_hamiltonian_gradient: need a 9-component density");
  const Vector3d l = rho.segment<3>(6);
  const Matrix3d minv = checked_inverse(inertia_from_density(rho));
  const Vector3d omega = minv * l;  // dH/dL

  // dH/dI_ab via d(I^{-1}) = -I^{-1} dI I^{-1}: diagonal components get
  // -omega_i^2/2, each off-diagonal basis element appears twice in the
  // symmetric tensor and gets -omega_i omega_j.
  VectorXd grad(kRmaDim);
  grad[0] = -0.5 * omega[0] * omega[0];
  grad[1] = -0.5 * omega[1] * omega[1];
  grad[2] = -0.5 * omega[2] * omega[2];
  grad[3] = -omega[1] * omega[2];
  grad[4] = -omega[0] * omega[2];
  grad[5] = -omega[0] * omega[1];
  grad.segment<3>(6) = omega;
  return grad;
}

double lie_poisson_crosscheck(const IntrinsicMoments& moments, const RotorState& state0,
                              double t_span, double tol, int n_samples) {
  if (n_samples < 2) throw ValidationError("lie_poisson_crosscheck: need >= 2 samples");
  std::vector<double> samples(n_samples);
  for (int i = 0; i < n_samples; ++i)
    samples[i] = t_span * (i + 1) / static_cast<double>(n_samples);

  const RotorTrajectory direct = evolve_rotor(moments, state0, t_span, tol, samples);

  const algebra::StructureConstants sc = rma_structure_constants();
  auto rhs = [&sc](double, const VectorXd& rho) {
    return algebra::lie_poisson_rhs(sc, rho, rma_hamiltonian_gradient(rho));
  };
  ode::Options opts;
  opts.tol = tol;
  const ode::Solution lp =
      ode::integrate(rhs, embed_density(moments, state0), 0.0, t_span, opts, samples);

  if (lp.times.size() != direct.times.size())
    throw NumericalError("lie_poisson_crosscheck: sample mismatch between integrations");

  double max_dev = 0.0;
  for (size_t i = 0; i < lp.times.size(); ++i) {
    const algebra::Density via_rotor = embed_density(moments, direct.states[i]);
    max_dev = std::max(max_dev, (via_rotor - lp.states[i]).cwiseAbs().maxCoeff());
  }
  return max_dev;
}

OrbitGeometry orbit_geometry_report(const IntrinsicMoments& moments) {
  const algebra::StructureConstants sc = rma_structure_constants();
  algebra::Density rho = algebra::Density::Zero(kRmaDim);
  rho[0] = moments.i1;
  rho[1] = moments.i2;
  rho[2] = moments.i3;

  const algebra::OrbitAnalysis oa = algebra::orbit_analysis(sc, rho);
  OrbitGeometry geom;
  geom.orbit_dim = oa.rank;
  geom.kernel = oa.kernel;
  geom.degenerate_moments = oa.rank < 6;

  // Does the kernel coincide with the span of the three diagonal moments?
  if (oa.kernel.cols() == 3) {
    double off = 0.0;
    for (int c = 0; c < 3; ++c)
      off = std::max(off, oa.kernel.col(c).tail(kRmaDim - 3).cwiseAbs().maxCoeff());
    geom.kernel_is_diagonal_moments = off < 1e-9;
  }
  return geom;
}

}  // namespace cqd::rotor
