#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqd/barrier.hpp"

namespace cqd::schrodinger {

// Uniform spatial grid with Dirichlet far boundaries.
struct Grid {
  double x_min;
  double x_max;
  int n;

  Grid(double x_min_, double x_max_, int n_);
  double dx() const { return (x_max - x_min) / (n - 1); }
  double x(int i) const { return x_min + i * dx(); }
};

struct GridState {
  Eigen::VectorXcd psi;
  double t = 0.0;
};

// Normalized minimal packet psi(alpha, xbar, kbar) sampled on the grid.
// Requires the support (8 sqrt(alpha)) to clear both edges.
GridState init_gaussian(const Grid& grid, double alpha, double xbar, double kbar);

double norm_squared(const Grid& grid, const GridState& state);

// Crank-Nicolson propagator for H = -d^2/dx^2 + V with time step fixed at
// construction; the tridiagonal elimination coefficients are cached so a step
// costs one sweep.  Unitary to round-off.
class CrankNicolson {
 public:
  CrankNicolson(const Grid& grid, const Eigen::VectorXd& potential, double dt);
  CrankNicolson(const Grid& grid, const barrier::BarrierPotential& v, double dt);

  void step(GridState& state) const;
  void step_backward(GridState& state) const;  // dt -> -dt
  double dt() const { return dt_; }

 private:
  void advance(GridState& state, bool backward) const;

  int n_;
  double dt_;
  double dx_;
  // Cayley form: (1 + i dt H / 2) psi' = (1 - i dt H / 2) psi
  Eigen::VectorXcd diag_plus_, diag_minus_;   // diagonal of A and B
  std::complex<double> off_plus_, off_minus_; // off-diagonals
  Eigen::VectorXcd forward_denom_;            // cached Thomas coefficients for A
  Eigen::VectorXcd backward_denom_;           // and for the reversed step
  mutable Eigen::VectorXcd work_;
};

// One CN update of `state` (convenience wrapper constructing the stepper).
GridState step(const Grid& grid, const GridState& state, double dt,
               const barrier::BarrierPotential& v);

struct Moments {
  double x_mean = 0.0;
  double p_mean = 0.0;
  double x_var = 0.0;
  double p_var = 0.0;
};

// Position moments by trapezoid quadrature, momentum moments through the
// discrete Fourier transform of psi.
Moments moments(const Grid& grid, const GridState& state);

struct TrackRow {
  double t;
  Moments m;
};

std::vector<TrackRow> ehrenfest_track(const Grid& grid, const std::vector<GridState>& states);

// Probability current 2 Im(psi* dpsi/dx) at grid point i.
double probability_current(const Grid& grid, const GridState& state, int i);

// Resolution and stopping controls for the packet-transmission oracle.
// Zeros mean "derive from the physics": dx = lambda_min/20, dt = dx^2/4,
// domain sized so reflected and transmitted mass stay clear of the edges
// until the latest admissible stop.
struct OracleSettings {
  double dx = 0.0;
  double dt = 0.0;
  double x_pad = 0.0;          // extra domain padding
  double max_time = 0.0;       // hard cap on the evolution time
  double flux_tol = 1e-8;      // interaction-complete flux threshold
  double barrier_mass_tol = 1e-4;  // alternative stop: mass still inside [0, L]
  double probe_interval = 1.0;
  int probes = 5;
};

struct TransmissionMeasurement {
  double transmission = 0.0;
  double barrier_mass = 0.0;  // residual mass inside [0, L] at stop time
  double stop_time = 0.0;
  std::string stop_reason;
};

// Evolves a packet from far upstream through the barrier until the
// interaction completes, then returns the mass beyond x = L.  Throws
// GeometryError if reflected/transmitted mass reaches the domain edges.
TransmissionMeasurement transmission_of_packet(double alpha, double kbar,
                                               const barrier::BarrierPotential& v,
                                               const OracleSettings& settings = {});

struct FamilyFit {
  double xbar = 0.0;
  double kbar = 0.0;
  double fidelity = 0.0;
  bool converged = false;
};

// max over (xbar, kbar) of |<alpha, xbar, kbar | psi>|^2, seeded at the
// packet's first moments and refined by Nelder-Mead.
FamilyFit fidelity_to_family(const Grid& grid, const GridState& state, double alpha);

// CSV dumps (schemas: "x,re_psi,im_psi,abs2" and "t,x_mean,p_mean,x_var,p_var").
void write_snapshot_csv(const std::string& path, const Grid& grid, const GridState& state);
void write_track_csv(const std::string& path, const std::vector<TrackRow>& rows);

}  // namespace cqd::schrodinger
