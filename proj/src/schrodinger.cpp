#include "cqd/schrodinger.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "cqd/errors.hpp"

namespace cqd::schrodinger {

using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

namespace {
constexpr complex<double> kI{0.0, 1.0};
}

Grid::Grid(double x_min_, double x_max_, int n_) : x_min(x_min_), x_max(x_max_), n(n_) {
  if (!(x_max > x_min)) throw ValidationError("grid: x_max must exceed x_min");
  if (n < 3) throw ValidationError("grid: need at least 3 points");
}

GridState init_gaussian(const Grid& grid, double alpha, double xbar, double kbar) {
  if (!(alpha > 0)) throw ValidationError("init_gaussian: alpha must be positive");
  const double support = 8.0 * std::sqrt(alpha);
  if (xbar - support < grid.x_min || xbar + support > grid.x_max)
    throw GeometryError("init_gaussian: packet support extends past the grid edge "
                        "(need |xbar - edge| > 8 sqrt(alpha))");

  GridState state;
  state.psi.resize(grid.n);
  const double norm = std::pow(std::numbers::pi * alpha, -0.25);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double d = x - xbar;
    state.psi[i] = norm * std::exp(-d * d / (2.0 * alpha)) * std::exp(kI * (kbar * x));
  }
  state.psi /= std::sqrt(norm_squared(grid, state));
  return state;
}

double norm_squared(const Grid& grid, const GridState& state) {
  // trapezoid; the half-weights at the (Dirichlet) ends
  double s = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double w = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
    s += w * std::norm(state.psi[i]);
  }
  return s * grid.dx();
}

CrankNicolson::CrankNicolson(const Grid& grid, const VectorXd& potential, double dt)
    : n_(grid.n), dt_(dt), dx_(grid.dx()) {
  if (!(dt > 0)) throw ValidationError("crank-nicolson: dt must be positive");
  if (potential.size() != n_) throw ValidationError("crank-nicolson: potential size mismatch");

  const double inv_dx2 = 1.0 / (dx_ * dx_);
  const complex<double> half_idt = 0.5 * kI * dt_;
  off_plus_ = half_idt * (-inv_dx2);
  off_minus_ = -off_plus_;

  diag_plus_.resize(n_);
  diag_minus_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    const double h_diag = 2.0 * inv_dx2 + potential[i];
    diag_plus_[i] = 1.0 + half_idt * h_diag;
    diag_minus_[i] = 1.0 - half_idt * h_diag;
  }

  auto thomas_denominators = [this](const VectorXcd& diag, complex<double> off) {
    VectorXcd denom(n_);
    denom[0] = diag[0];
    for (int i = 1; i < n_; ++i) denom[i] = diag[i] - off * off / denom[i - 1];
    return denom;
  };
  forward_denom_ = thomas_denominators(diag_plus_, off_plus_);
  backward_denom_ = thomas_denominators(diag_minus_, off_minus_);
  work_.resize(n_);
}

namespace {
VectorXd sampled_potential(const Grid& grid, const barrier::BarrierPotential& v) {
  VectorXd pot(grid.n);
  for (int i = 0; i < grid.n; ++i) pot[i] = barrier::potential(v, grid.x(i));
  return pot;
}
}  // namespace

CrankNicolson::CrankNicolson(const Grid& grid, const barrier::BarrierPotential& v, double dt)
    : CrankNicolson(grid, sampled_potential(grid, v), dt) {}

void CrankNicolson::advance(GridState& state, bool backward) const {
  const VectorXcd& mul_diag = backward ? diag_plus_ : diag_minus_;
  const complex<double> mul_off = backward ? off_plus_ : off_minus_;
  const VectorXcd& solve_denom = backward ? backward_denom_ : forward_denom_;
  const complex<double> solve_off = backward ? off_minus_ : off_plus_;

  VectorXcd& rhs = work_;
  const VectorXcd& psi = state.psi;
  rhs[0] = mul_diag[0] * psi[0] + mul_off * psi[1];
  for (int i = 1; i < n_ - 1; ++i)
    rhs[i] = mul_diag[i] * psi[i] + mul_off * (psi[i - 1] + psi[i + 1]);
  rhs[n_ - 1] = mul_diag[n_ - 1] * psi[n_ - 1] + mul_off * psi[n_ - 2];

  // Thomas sweep with precomputed denominators
  for (int i = 1; i < n_; ++i) rhs[i] -= (solve_off / solve_denom[i - 1]) * rhs[i - 1];
  state.psi[n_ - 1] = rhs[n_ - 1] / solve_denom[n_ - 1];
  for (int i = n_ - 2; i >= 0; --i)
    state.psi[i] = (rhs[i] - solve_off * state.psi[i + 1]) / solve_denom[i];

  state.t += backward ? -dt_ : dt_;
}

void CrankNicolson::step(GridState& state) const { advance(state, false); }
void CrankNicolson::step_backward(GridState& state) const { advance(state, true); }

GridState step(const Grid& grid, const GridState& state, double dt,
               const barrier::BarrierPotential& v) {
  CrankNicolson cn(grid, v, dt);
  GridState out = state;
  cn.step(out);
  return out;
}

Moments moments(const Grid& grid, const GridState& state) {
  Moments m;
  const double dx = grid.dx();
  double norm = 0.0, x1 = 0.0, x2 = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double w = ((i == 0 || i == grid.n - 1) ? 0.5 : 1.0) * std::norm(state.psi[i]);
    const double x = grid.x(i);
    norm += w;
    x1 += w * x;
    x2 += w * x * x;
  }
  x1 /= norm;
  x2 /= norm;
  m.x_mean = x1;
  m.x_var = x2 - x1 * x1;

  // momentum moments from the DFT of psi
  Eigen::FFT<double> fft;
  std::vector<complex<double>> in(state.psi.data(), state.psi.data() + grid.n);
  std::vector<complex<double>> spec;
  fft.fwd(spec, in);
  const double dk = 2.0 * std::numbers::pi / (grid.n * dx);
  double pw = 0.0, p1 = 0.0, p2 = 0.0;
  for (int mth = 0; mth < grid.n; ++mth) {
    const int shifted = (mth <= grid.n / 2) ? mth : mth - grid.n;
    const double k = shifted * dk;
    const double w = std::norm(spec[mth]);
    pw += w;
    p1 += w * k;
    p2 += w * k * k;
  }
  m.p_mean = p1 / pw;
  m.p_var = p2 / pw - m.p_mean * m.p_mean;
  return m;
}

std::vector<TrackRow> ehrenfest_track(const Grid& grid, const std::vector<GridState>& states) {
  std::vector<TrackRow> rows;
  rows.reserve(states.size());
  for (const auto& s : states) rows.push_back({s.t, moments(grid, s)});
  return rows;
}

double probability_current(const Grid& grid, const GridState& state, int i) {
  if (i <= 0 || i >= grid.n - 1) return 0.0;
  const complex<double> dpsi = (state.psi[i + 1] - state.psi[i - 1]) / (2.0 * grid.dx());
  return 2.0 * std::imag(std::conj(state.psi[i]) * dpsi);
}

TransmissionMeasurement transmission_of_packet(double alpha, double kbar,
                                               const barrier::BarrierPotential& v,
                                               const OracleSettings& settings) {
  if (!(kbar > 0)) throw ValidationError("transmission_of_packet: kbar must be positive");
  const double sigma_k = 1.0 / std::sqrt(2.0 * alpha);
  if (!(sigma_k < kbar / 4.0))
    throw ValidationError("transmission_of_packet: momentum spread 1/sqrt(2 alpha) must stay "
                          "below kbar/4 (quasi-monochromatic oracle regime)");

  const double support = 8.0 * std::sqrt(alpha);
  const double xbar0 = -(support + 10.0);
  const double k_max = kbar + 8.0 * sigma_k;
  const double lambda_min = 2.0 * std::numbers::pi / k_max;

  const double dx = settings.dx > 0 ? settings.dx : lambda_min / 20.0;
  const double dt = settings.dt > 0 ? settings.dt : dx * dx / 4.0;

  // Time for the rear of the packet to clear the barrier, then slack for
  // quasi-trapped near-threshold components to drain.
  const double t_clear = (std::abs(xbar0) + v.length + support) / (2.0 * kbar);
  const double max_time = settings.max_time > 0 ? settings.max_time : 3.0 * t_clear;

  const double v_fast = 2.0 * (kbar + 5.0 * sigma_k);
  const double pad = settings.x_pad + 20.0 * lambda_min;
  const double reflected_reach = std::max(v_fast * max_time - std::abs(xbar0), 0.0);
  const double x_min = xbar0 - support - reflected_reach - pad;
  const double x_max = xbar0 + support + v_fast * max_time + v.length + pad;

  const int n = static_cast<int>(std::ceil((x_max - x_min) / dx)) + 1;
  const Grid grid(x_min, x_min + dx * (n - 1), n);

  GridState state = init_gaussian(grid, alpha, xbar0, kbar);
  const CrankNicolson cn(grid, v, dt);

  const int i_left = static_cast<int>(std::floor((0.0 - grid.x_min) / dx));
  const int i_right = static_cast<int>(std::ceil((v.length - grid.x_min) / dx));
  const int edge_band = 5;

  auto barrier_mass = [&]() {
    double m = 0.0;
    for (int i = i_left; i <= i_right; ++i) m += std::norm(state.psi[i]);
    return m * dx;
  };
  auto edge_mass = [&]() {
    double m = 0.0;
    for (int i = 0; i < edge_band; ++i)
      m += std::norm(state.psi[i]) + std::norm(state.psi[grid.n - 1 - i]);
    return m * dx;
  };

  const long steps_per_probe =
      std::max<long>(1, static_cast<long>(std::llround(settings.probe_interval / dt)));
  int quiet_probes = 0;
  bool engaged = false;  // the packet has actually reached the barrier
  std::string stop_reason;

  while (true) {
    for (long s = 0; s < steps_per_probe; ++s) cn.step(state);

    if (edge_mass() > 1e-8)
      throw GeometryError("transmission_of_packet: mass reached the domain edge at t = " +
                          std::to_string(state.t) + "; enlarge the grid");

    const double flux =
        std::max(std::abs(probability_current(grid, state, i_left)),
                 std::abs(probability_current(grid, state, i_right)));
    if (flux > 10.0 * settings.flux_tol) engaged = true;
    quiet_probes = (engaged && flux < settings.flux_tol) ? quiet_probes + 1 : 0;

    if (quiet_probes >= settings.probes) {
      stop_reason = "flux";
      break;
    }
    if (engaged && state.t > t_clear && barrier_mass() < settings.barrier_mass_tol) {
      stop_reason = "barrier_mass";
      break;
    }
    if (state.t >= max_time) {
      const double residual = barrier_mass();
      if (residual > 50.0 * settings.barrier_mass_tol)
        throw NumericalError("transmission_of_packet: interaction incomplete at max_time = " +
                             std::to_string(max_time) + " (barrier mass " +
                             std::to_string(residual) + ")");
      stop_reason = "max_time";
      break;
    }
  }

  TransmissionMeasurement out;
  out.stop_time = state.t;
  out.stop_reason = stop_reason;
  out.barrier_mass = barrier_mass();
  double mass_right = 0.0;
  for (int i = i_right + 1; i < grid.n; ++i) mass_right += std::norm(state.psi[i]);
  out.transmission = mass_right * dx;
  return out;
}

namespace {

// Un-validated family packet used by the fidelity fit (the fit may probe
// parameters whose tails clip the grid; the overlap integral is still fine).
VectorXcd family_packet(const Grid& grid, double alpha, double xbar, double kbar) {
  VectorXcd phi(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double d = x - xbar;
    phi[i] = std::exp(-d * d / (2.0 * alpha)) * std::exp(kI * (kbar * x));
  }
  double nrm = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double w = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
    nrm += w * std::norm(phi[i]);
  }
  phi /= std::sqrt(nrm * grid.dx());
  return phi;
}

}  // namespace

FamilyFit fidelity_to_family(const Grid& grid, const GridState& state, double alpha) {
  const double dx = grid.dx();
  auto fidelity = [&](double xbar, double kbar) {
    const VectorXcd phi = family_packet(grid, alpha, xbar, kbar);
    complex<double> overlap = 0.0;
    for (int i = 0; i < grid.n; ++i) {
      const double w = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
      overlap += w * std::conj(phi[i]) * state.psi[i];
    }
    overlap *= dx;
    return std::norm(overlap) / norm_squared(grid, state);
  };

  const Moments m = moments(grid, state);
  // Nelder-Mead on -fidelity, seeded at the packet's first moments.
  struct Vertex {
    double x, k, f;
  };
  auto make = [&](double x, double k) { return Vertex{x, k, -fidelity(x, k)}; };

  const double sx = std::max(0.25 * std::sqrt(alpha / 2.0), 1e-3);
  const double sk = std::max(0.25 / std::sqrt(2.0 * alpha), 1e-4);
  std::array<Vertex, 3> simplex = {make(m.x_mean, m.p_mean), make(m.x_mean + sx, m.p_mean),
                                   make(m.x_mean, m.p_mean + sk)};

  FamilyFit fit;
  const int max_iter = 400;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    if (std::abs(simplex[2].f - simplex[0].f) < 1e-8) break;

    const double cx = 0.5 * (simplex[0].x + simplex[1].x);
    const double ck = 0.5 * (simplex[0].k + simplex[1].k);
    Vertex refl = make(cx + (cx - simplex[2].x), ck + (ck - simplex[2].k));
    if (refl.f < simplex[0].f) {
      Vertex exp_v = make(cx + 2.0 * (cx - simplex[2].x), ck + 2.0 * (ck - simplex[2].k));
      simplex[2] = (exp_v.f < refl.f) ? exp_v : refl;
    } else if (refl.f < simplex[1].f) {
      simplex[2] = refl;
    } else {
      Vertex contr = make(cx + 0.5 * (simplex[2].x - cx), ck + 0.5 * (simplex[2].k - ck));
      if (contr.f < simplex[2].f) {
        simplex[2] = contr;
      } else {
        simplex[1] = make(0.5 * (simplex[0].x + simplex[1].x),
                          0.5 * (simplex[0].k + simplex[1].k));
        simplex[2] = make(0.5 * (simplex[0].x + simplex[2].x),
                          0.5 * (simplex[0].k + simplex[2].k));
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  fit.xbar = simplex[0].x;
  fit.kbar = simplex[0].k;
  fit.fidelity = -simplex[0].f;
  fit.converged = iter < max_iter;
  return fit;
}

void write_snapshot_csv(const std::string& path, const Grid& grid, const GridState& state) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_snapshot_csv: cannot open " + path);
  out << "x,re_psi,im_psi,abs2\n";
  char buf[128];
  for (int i = 0; i < grid.n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", grid.x(i),
                  state.psi[i].real(), state.psi[i].imag(), std::norm(state.psi[i]));
    out << buf;
  }
}

void write_track_csv(const std::string& path, const std::vector<TrackRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_track_csv: cannot open " + path);
  out << "t,x_mean,p_mean,x_var,p_var\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.m.x_mean,
                  r.m.p_mean, r.m.x_var, r.m.p_var);
    out << buf;
  }
}

}  // namespace cqd::schrodinger
