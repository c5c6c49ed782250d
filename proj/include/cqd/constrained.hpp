#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cqd/algebra.hpp"
#include "cqd/barrier.hpp"

namespace cqd::constrained {

// A parametrized manifold of quantum states z -> |psi(z)> described by its
// tangent-overlap data: the Hermitian matrix <d_mu psi | d_nu psi> at z, the
// energy H(z) = <psi(z)|H|psi(z)> and its gradient.
class CoherentFamily {
 public:
  virtual ~CoherentFamily() = default;
  virtual int n_params() const = 0;
  virtual Eigen::MatrixXcd tangent_overlaps(const Eigen::VectorXd& z) const = 0;
  virtual double energy(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd energy_gradient(const Eigen::VectorXd& z) const = 0;
};

// Restriction of the Fubini-Study form to the family at a point:
// sigma_{mu nu} = -2 hbar Im <d_mu psi | d_nu psi>, hbar = 1.
struct SymplecticRestriction {
  Eigen::MatrixXd sigma;
  bool degenerate = false;
  int rank = 0;
  Eigen::MatrixXd kernel;  // n x nullity, empty when nondegenerate
};

SymplecticRestriction form_restriction(const CoherentFamily& family,
                                       const Eigen::VectorXd& z,
                                       double rel_threshold = 1e-9);

// zdot = sigma^{-1} grad H, oriented so the Gaussian family reproduces
// xbar_dot = +2 kbar.  Throws DegenerateFormError (with the kernel attached)
// when the restricted form is singular; the caller must then take the
// projection route instead.
Eigen::VectorXd eom_rhs(const CoherentFamily& family, const Eigen::VectorXd& z);

struct Observable {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

// {F, G}_C = (grad F)^T sigma^{-1} (grad G) at z.
double bracket_on_family(const CoherentFamily& family, const Observable& f,
                         const Observable& g, const Eigen::VectorXd& z);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> energies;
};

// Adaptive RK4(5) on zdot = sigma^{-1} grad H.  Energy drift is checked
// post-hoc against 100 * tol * |t - t0| and reported as a NumericalError if
// violated.  sample_times (optional) selects the output instants.
Trajectory integrate(const CoherentFamily& family, const Eigen::VectorXd& z0,
                     double t_span, double tol,
                     const std::vector<double>& sample_times = {});

// ---------------------------------------------------------------------------

// Minimal-uncertainty Gaussian packets psi(alpha, xbar, kbar) over the square
// barrier; parameters z = (xbar, kbar).  Overlaps are analytic:
// sigma_{xbar kbar} = -1 everywhere.
class GaussianPacketFamily : public CoherentFamily {
 public:
  GaussianPacketFamily(double alpha, const barrier::BarrierPotential& v);

  int n_params() const override { return 2; }
  Eigen::MatrixXcd tangent_overlaps(const Eigen::VectorXd& z) const override;
  double energy(const Eigen::VectorXd& z) const override;
  Eigen::VectorXd energy_gradient(const Eigen::VectorXd& z) const override;

  double alpha() const { return alpha_; }
  const barrier::BarrierPotential& potential() const { return barrier_; }

 private:
  double alpha_;
  barrier::BarrierPotential barrier_;
};

// A coherent manifold presented through its classical image: coordinates are
// density components, the two-form is the Lie-Poisson form sigma(rho) of the
// supplied structure constants.  Degenerate orbits (e.g. the 9-parameter
// rotor manifold) surface here as rank-deficient restrictions.
class LiePoissonFamily : public CoherentFamily {
 public:
  LiePoissonFamily(algebra::StructureConstants sc,
                   std::function<double(const Eigen::VectorXd&)> hamiltonian,
                   std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient);

  int n_params() const override { return sc_.dim(); }
  Eigen::MatrixXcd tangent_overlaps(const Eigen::VectorXd& z) const override;
  double energy(const Eigen::VectorXd& z) const override;
  Eigen::VectorXd energy_gradient(const Eigen::VectorXd& z) const override;

 private:
  algebra::StructureConstants sc_;
  std::function<double(const Eigen::VectorXd&)> h_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_h_;
};

// Integrates a packet launched far upstream of the barrier and reports
// 1 (transmitted) or 0 (reflected).  Transmit when xbar > L + 10 sqrt(alpha)
// + 10; reflect when xbar < xbar0 with negative velocity.
int constrained_transmission(double alpha, double kbar, const barrier::BarrierPotential& v,
                             double tol = 1e-10);

// CSV dump with schema "t,xbar,kbar,H" (two-parameter families).
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

}  // namespace cqd::constrained
