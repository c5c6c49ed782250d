#include "cqd/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numbers>
#include <thread>

#include "cqd/algebra.hpp"
#include "cqd/algebra_io.hpp"
#include "cqd/barrier.hpp"
#include "cqd/cli/config.hpp"
#include "cqd/cli/csv.hpp"
#include "cqd/cli/svg.hpp"
#include "cqd/constrained.hpp"
#include "cqd/errors.hpp"
#include "cqd/rotor.hpp"
#include "cqd/schrodinger.hpp"
#include "cqd/version.hpp"

namespace cqd::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// FNV-1a 64-bit over a file's bytes; good enough to pin fixture identity in
// the run manifest.
std::string fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("manifest: cannot hash " + path.string());
  uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& effective_config, const std::vector<std::string>& outputs,
                    const std::vector<fs::path>& fixtures) {
  json m;
  m["command"] = command;
  m["config"] = effective_config;
  m["version"] = kVersion;
  m["outputs"] = outputs;
  json fx = json::object();
  for (const auto& f : fixtures) fx[f.filename().string()] = fnv1a_file(f);
  m["fixtures"] = fx;
  std::ofstream out(out_dir / "manifest.json");
  if (!out) throw ValidationError("manifest: cannot write in " + out_dir.string());
  out << m.dump(1) << "\n";
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json merged(const json& defaults, const json& user) {
  json out = defaults;
  for (auto it = user.begin(); it != user.end(); ++it) out[it.key()] = *it;
  return out;
}

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  return buf;
}

}  // namespace

json default_config(const std::string& command) {
  json d = json::object();
  if (command == "fig1") {
    d["alphas"] = {0.25, 1.0, 2.0, 8.0};
    d["xbar"] = {{"min", -8.0}, {"max", 16.0}, {"n", 481}};
    d["V0"] = 1.0;
    d["L"] = 8.0;
  } else if (command == "fig2") {
    d["modes"] = {"icm", "cm", "qm", "qm_avg"};
    d["alphas"] = {1.0, 4.0, 16.0, 64.0};
    d["k"] = {{"min", 0.02}, {"max", 2.0}, {"n", 100}};
    d["V0"] = 1.0;
    d["L"] = 8.0;
    d["cqm_tol"] = 1e-10;
  } else if (command == "rotor") {
    d["moments"] = {1.0, 2.0, 3.0};
    d["L0"] = {1.0, 0.55, -0.9};
    d["t_span"] = 50.0;
    d["tol"] = 1e-10;
    d["samples"] = 501;
    d["svg"] = true;
  } else if (command == "oracle") {
    d["alpha"] = 400.0;
    d["kbars"] = {1.1, 1.3, 1.5, 1.7, 2.0};
    d["continuity_kbar"] = 1.0;
    d["V0"] = 1.0;
    d["L"] = 8.0;
    d["tolerance"] = 0.02;
    d["variant_fail_threshold"] = 0.05;
    d["include_continuity"] = true;
    d["include_variant_check"] = true;
    d["include_convergence"] = true;
    d["include_fidelity_demo"] = true;
    d["dx"] = 0.07;
    d["dt"] = 0.004;
  } else if (command == "algebra-report") {
    d["fixture"] = "";  // empty: built-in rotor model algebra
    d["rho"] = {1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  } else {
    throw ConfigError("unknown command: " + command);
  }
  return d;
}

// ---------------------------------------------------------------------------

RunResult cmd_fig1(const json& user, const fs::path& out_dir, int threads) {
  const json cfg = merged(default_config("fig1"), user);
  reject_unknown_keys(cfg, {"alphas", "xbar", "V0", "L"}, "fig1");
  const auto alphas = get_number_list(cfg, "alphas", {}, "fig1", true);
  const auto xbars = get_grid(cfg, "xbar", -8.0, 16.0, 481, "fig1");
  const barrier::BarrierPotential v(get_positive(cfg, "V0", 1.0, "fig1"),
                                    get_positive(cfg, "L", 8.0, "fig1"));

  fs::create_directories(out_dir);
  std::vector<std::vector<std::string>> rows(alphas.size() * xbars.size());
  parallel_for(static_cast<int>(alphas.size()), threads, [&](int ai) {
    for (size_t xi = 0; xi < xbars.size(); ++xi) {
      const double vb = barrier::smeared_potential(v, alphas[ai], xbars[xi]);
      rows[ai * xbars.size() + xi] = {format_double(xbars[xi]), format_double(vb),
                                      format_double(alphas[ai]), format_double(v.v0),
                                      format_double(v.length)};
    }
  });
  write_csv(out_dir / "fig1.csv", "xbar,Vbar,alpha,V0,L", rows);

  LineChart chart;
  chart.title = "Smeared barrier potential";
  chart.x_label = "xbar";
  chart.y_label = "Vbar_alpha";
  chart.x_min = xbars.front();
  chart.x_max = xbars.back();
  chart.y_min = 0.0;
  chart.y_max = 1.05 * v.v0;
  for (size_t ai = 0; ai < alphas.size(); ++ai) {
    Series s;
    s.label = "alpha=" + alpha_tag(alphas[ai]);
    for (size_t xi = 0; xi < xbars.size(); ++xi) {
      s.x.push_back(xbars[xi]);
      s.y.push_back(barrier::smeared_potential(v, alphas[ai], xbars[xi]));
    }
    chart.series.push_back(std::move(s));
  }
  write_line_chart(out_dir / "fig1.svg", chart);

  RunResult r{out_dir, {"fig1.csv", "fig1.svg", "manifest.json"}, true};
  write_manifest(out_dir, "fig1", cfg, r.outputs, {});
  return r;
}

RunResult cmd_fig2(const json& user, const fs::path& out_dir, int threads) {
  const json cfg = merged(default_config("fig2"), user);
  reject_unknown_keys(cfg, {"modes", "alphas", "k", "V0", "L", "cqm_tol"}, "fig2");
  const auto modes = get_string_list(cfg, "modes", {}, "fig2");
  const auto alphas = get_number_list(cfg, "alphas", {}, "fig2", true);
  const auto kgrid = get_grid(cfg, "k", 0.02, 2.0, 100, "fig2");
  const barrier::BarrierPotential v(get_positive(cfg, "V0", 1.0, "fig2"),
                                    get_positive(cfg, "L", 8.0, "fig2"));
  const double cqm_tol = get_positive(cfg, "cqm_tol", 1e-10, "fig2");
  for (double k : kgrid)
    if (!(k > 0)) throw ConfigError("config: fig2.k must stay positive");
  for (const auto& m : modes)
    if (m != "icm" && m != "cm" && m != "qm" && m != "qm_avg" && m != "cqm")
      throw ConfigError("config: fig2.modes contains unknown mode " + m);

  fs::create_directories(out_dir);
  RunResult result{out_dir, {}, true};

  struct Curve {
    std::string file;
    std::string label;
    bool classical_panel;
    std::vector<double> t;
  };
  std::vector<Curve> curves;

  auto eval_curve = [&](const std::string& mode, double alpha) {
    std::vector<double> t(kgrid.size());
    parallel_for(static_cast<int>(kgrid.size()), threads, [&](int i) {
      const double k = kgrid[i];
      if (mode == "icm") t[i] = barrier::t_ideal(k);
      else if (mode == "cm") t[i] = barrier::t_classical_avg(alpha, k);
      else if (mode == "qm") t[i] = barrier::t_quantum(k, v);
      else if (mode == "qm_avg") t[i] = barrier::t_quantum_avg(alpha, k, v);
      else t[i] = constrained::constrained_transmission(alpha, k, v, cqm_tol);
    });
    return t;
  };

  for (const auto& mode : modes) {
    const bool per_alpha = (mode == "cm" || mode == "qm_avg" || mode == "cqm");
    const bool classical = (mode == "icm" || mode == "cm" || mode == "cqm");
    const std::vector<double> curve_alphas = per_alpha ? alphas : std::vector<double>{0.0};
    for (double alpha : curve_alphas) {
      Curve c;
      c.classical_panel = classical;
      c.file = per_alpha ? ("fig2_" + mode + "_a" + alpha_tag(alpha) + ".csv")
                         : ("fig2_" + mode + ".csv");
      c.label = per_alpha ? (mode + " a=" + alpha_tag(alpha)) : (mode + " (sharp)");
      c.t = eval_curve(mode, alpha);

      std::vector<std::vector<std::string>> rows(kgrid.size());
      for (size_t i = 0; i < kgrid.size(); ++i)
        rows[i] = {format_double(kgrid[i]), format_double(c.t[i]),
                   mode, per_alpha ? format_double(alpha) : "inf",
                   format_double(v.v0), format_double(v.length)};
      write_csv(out_dir / c.file, "k,T,mode,alpha,V0,L", rows);
      result.outputs.push_back(c.file);
      curves.push_back(std::move(c));
    }
  }

  auto make_panel = [&](bool classical, const std::string& file, const std::string& title) {
    LineChart chart;
    chart.title = title;
    chart.x_label = "kbar";
    chart.y_label = "T";
    chart.x_min = kgrid.front();
    chart.x_max = kgrid.back();
    chart.y_min = 0.0;
    chart.y_max = 1.05;
    for (const auto& c : curves) {
      if (c.classical_panel != classical) continue;
      Series s;
      s.label = c.label;
      s.x = kgrid;
      s.y = c.t;
      chart.series.push_back(std::move(s));
    }
    if (chart.series.empty()) return false;
    write_line_chart(out_dir / file, chart);
    result.outputs.push_back(file);
    return true;
  };
  make_panel(true, "fig2_classical.svg", "Transmission: classical families");
  make_panel(false, "fig2_quantum.svg", "Transmission: quantal families");

  result.outputs.push_back("manifest.json");
  write_manifest(out_dir, "fig2", cfg, result.outputs, {});
  return result;
}

RunResult cmd_rotor(const json& user, const fs::path& out_dir, int threads) {
  (void)threads;
  const json cfg = merged(default_config("rotor"), user);
  reject_unknown_keys(cfg, {"moments", "L0", "R0", "t_span", "tol", "samples", "svg"},
                      "rotor");
  const auto mvec = get_number_list(cfg, "moments", {}, "rotor", true);
  const auto l0 = get_number_list(cfg, "L0", {}, "rotor", false);
  if (mvec.size() != 3 || l0.size() != 3)
    throw ConfigError("config: rotor.moments and rotor.L0 must have 3 entries");
  const rotor::IntrinsicMoments moments(mvec[0], mvec[1], mvec[2]);
  const double t_span = get_positive(cfg, "t_span", 50.0, "rotor");
  const double tol = get_positive(cfg, "tol", 1e-10, "rotor");
  const int n_samples = get_int(cfg, "samples", 501, "rotor");
  if (n_samples < 2) throw ConfigError("config: rotor.samples must be at least 2");

  rotor::RotorState s0;
  s0.l_body = Eigen::Vector3d(l0[0], l0[1], l0[2]);
  if (cfg.contains("R0") && !cfg["R0"].is_null()) {
    const auto& r0 = cfg["R0"];
    const auto axis = get_number_list(r0, "axis", {0, 0, 1}, "rotor.R0", false);
    const double angle = get_number(r0, "angle", 0.0, "rotor.R0");
    if (axis.size() != 3) throw ConfigError("config: rotor.R0.axis must have 3 entries");
    Eigen::Vector3d a(axis[0], axis[1], axis[2]);
    if (a.norm() == 0) throw ConfigError("config: rotor.R0.axis must be nonzero");
    s0.orientation = Eigen::AngleAxisd(angle, a.normalized()).toRotationMatrix();
  }

  std::vector<double> samples(n_samples);
  for (int i = 0; i < n_samples; ++i) samples[i] = t_span * (i + 1) / n_samples;

  fs::create_directories(out_dir);
  const auto traj = rotor::evolve_rotor(moments, s0, t_span, tol, samples);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(traj.times.size());
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const auto& st = traj.states[i];
    std::vector<std::string> row{format_double(traj.times[i]),
                                 format_double(st.l_body[0]),
                                 format_double(st.l_body[1]),
                                 format_double(st.l_body[2])};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) row.push_back(format_double(st.orientation(r, c)));
    row.push_back(format_double(traj.energies[i]));
    row.push_back(format_double(traj.l_squared[i]));
    rows.push_back(std::move(row));
  }
  write_csv(out_dir / "trajectory.csv",
            "t,L1,L2,L3,R11,R12,R13,R21,R22,R23,R31,R32,R33,H,Lsq", rows);

  const double e0 = rotor::classical_hamiltonian(moments, s0);
  const double lsq0 = s0.l_body.squaredNorm();
  double max_dh = 0.0, max_dl2 = 0.0, max_orient = 0.0;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    max_dh = std::max(max_dh, std::abs(traj.energies[i] - e0));
    max_dl2 = std::max(max_dl2, std::abs(traj.l_squared[i] - lsq0));
    const Eigen::Matrix3d& r = traj.states[i].orientation;
    max_orient = std::max(
        max_orient,
        (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
  }
  json conservation;
  conservation["H0"] = e0;
  conservation["Lsq0"] = lsq0;
  conservation["max_abs_dH"] = max_dh;
  conservation["max_abs_dLsq"] = max_dl2;
  conservation["max_rel_dH"] = (e0 != 0) ? max_dh / std::abs(e0) : max_dh;
  conservation["max_rel_dLsq"] = (lsq0 != 0) ? max_dl2 / lsq0 : max_dl2;
  conservation["max_orientation_residual"] = max_orient;
  conservation["bound"] = 100.0 * tol * t_span;
  {
    std::ofstream out(out_dir / "conservation.json");
    out << conservation.dump(1) << "\n";
  }

  const auto geom = rotor::orbit_geometry_report(moments);
  json geometry;
  geometry["manifold_dim"] = geom.manifold_dim;
  geometry["orbit_dim"] = geom.orbit_dim;
  geometry["kernel_is_diagonal_moments"] = geom.kernel_is_diagonal_moments;
  geometry["degenerate_moments"] = geom.degenerate_moments;
  json kernel = json::array();
  for (int c = 0; c < geom.kernel.cols(); ++c) {
    json col = json::array();
    for (int r = 0; r < geom.kernel.rows(); ++r) col.push_back(geom.kernel(r, c));
    kernel.push_back(col);
  }
  geometry["kernel_basis"] = kernel;
  geometry["asymmetric"] = moments.is_asymmetric();
  {
    std::ofstream out(out_dir / "geometry.json");
    out << geometry.dump(1) << "\n";
  }

  RunResult result{out_dir, {"trajectory.csv", "conservation.json", "geometry.json"}, true};

  if (get_bool(cfg, "svg", true, "rotor")) {
    LineChart chart;
    chart.title = "Body-frame angular momentum";
    chart.x_label = "t";
    chart.y_label = "Lbar";
    chart.x_min = 0.0;
    chart.x_max = t_span;
    double lmax = 1e-12;
    for (const auto& st : traj.states) lmax = std::max(lmax, st.l_body.cwiseAbs().maxCoeff());
    chart.y_min = -1.1 * lmax;
    chart.y_max = 1.1 * lmax;
    const char* names[3] = {"L1", "L2", "L3"};
    for (int c = 0; c < 3; ++c) {
      Series s;
      s.label = names[c];
      for (size_t i = 0; i < traj.times.size(); ++i) {
        s.x.push_back(traj.times[i]);
        s.y.push_back(traj.states[i].l_body[c]);
      }
      chart.series.push_back(std::move(s));
    }
    write_line_chart(out_dir / "rotor.svg", chart);
    result.outputs.push_back("rotor.svg");
  }

  result.outputs.push_back("manifest.json");
  write_manifest(out_dir, "rotor", cfg, result.outputs, {});
  return result;
}

RunResult cmd_oracle(const json& user, const fs::path& out_dir, int threads) {
  const json cfg = merged(default_config("oracle"), user);
  reject_unknown_keys(cfg,
                      {"alpha", "kbars", "continuity_kbar", "V0", "L", "tolerance",
                       "variant_fail_threshold", "include_continuity",
                       "include_variant_check", "include_convergence",
                       "include_fidelity_demo", "dx", "dt"},
                      "oracle");
  const double alpha = get_positive(cfg, "alpha", 400.0, "oracle");
  const auto kbars = get_number_list(cfg, "kbars", {}, "oracle", true);
  const barrier::BarrierPotential v(get_positive(cfg, "V0", 1.0, "oracle"),
                                    get_positive(cfg, "L", 8.0, "oracle"));
  const double tolerance = get_positive(cfg, "tolerance", 0.02, "oracle");
  const double fail_threshold = get_positive(cfg, "variant_fail_threshold", 0.05, "oracle");
  const double dx = get_positive(cfg, "dx", 0.07, "oracle");
  const double dt = get_positive(cfg, "dt", 0.004, "oracle");

  fs::create_directories(out_dir);
  json report;
  report["alpha"] = alpha;
  report["tolerance"] = tolerance;
  bool passed = true;

  auto settings_for = [&](double kbar) {
    schrodinger::OracleSettings s;
    s.dx = dx;
    s.dt = dt;
    // Near-threshold components remain quasi-trapped inside the barrier with
    // lifetimes ~ 2/(k^2 - 1); relax the drain target there and cap the run,
    // trading a bounded measurement error (the residual mass) for runtime.
    // The domain is sized from max_time, so the caps also bound the grid.
    if (kbar <= 1.05) {
      s.barrier_mass_tol = 0.015;
      s.max_time = 300.0;
    } else if (kbar <= 1.2) {
      s.barrier_mass_tol = 1e-3;
      s.max_time = 250.0;
    }
    return s;
  };

  // 1. agreement campaign: dynamic packet measurement vs quadrature
  double measured_at_1p5 = -1.0;
  {
    json points = json::array();
    std::vector<json> results(kbars.size());
    parallel_for(static_cast<int>(kbars.size()), threads, [&](int i) {
      const double kbar = kbars[i];
      const auto m = schrodinger::transmission_of_packet(alpha, kbar, v, settings_for(kbar));
      const double quad = barrier::t_quantum_avg(alpha, kbar, v);
      json p;
      p["kbar"] = kbar;
      p["measured"] = m.transmission;
      p["quadrature"] = quad;
      p["discrepancy"] = std::abs(m.transmission - quad);
      p["residual_barrier_mass"] = m.barrier_mass;
      p["stop_time"] = m.stop_time;
      p["stop_reason"] = m.stop_reason;
      p["pass"] = std::abs(m.transmission - quad) <= tolerance;
      results[i] = std::move(p);
    });
    for (auto& p : results) {
      passed = passed && p["pass"].get<bool>();
      if (p["kbar"].get<double>() == 1.5) measured_at_1p5 = p["measured"].get<double>();
      points.push_back(std::move(p));
    }
    report["agreement"] = points;
  }

  // 2. threshold continuity point
  if (get_bool(cfg, "include_continuity", true, "oracle")) {
    const double kbar = get_positive(cfg, "continuity_kbar", 1.0, "oracle");
    const auto m = schrodinger::transmission_of_packet(alpha, kbar, v, settings_for(kbar));
    const double quad = barrier::t_quantum_avg(alpha, kbar, v);
    json p;
    p["kbar"] = kbar;
    p["measured"] = m.transmission;
    p["quadrature"] = quad;
    p["discrepancy"] = std::abs(m.transmission - quad);
    p["residual_barrier_mass"] = m.barrier_mass;
    p["stop_time"] = m.stop_time;
    p["stop_reason"] = m.stop_reason;
    p["limit_value_t_quantum_at_1"] = barrier::t_quantum(1.0, v);
    p["pass"] = std::abs(m.transmission - quad) <= tolerance;
    passed = passed && p["pass"].get<bool>();
    report["continuity"] = p;
  }

  // 3. the printed-linear variant must fail against the same measurements
  if (get_bool(cfg, "include_variant_check", true, "oracle")) {
    double worst = 0.0;
    json points = json::array();
    for (const auto& p : report["agreement"]) {
      const double kbar = p["kbar"].get<double>();
      const double measured = p["measured"].get<double>();
      const double variant = barrier::t_quantum_avg(
          alpha, kbar, v, barrier::TransmissionFormula::kPrintedLinear);
      const double d = std::abs(measured - variant);
      worst = std::max(worst, d);
      points.push_back({{"kbar", kbar}, {"variant_quadrature", variant}, {"discrepancy", d}});
    }
    const bool rejected = worst > fail_threshold;
    report["variant_check"] = {{"points", points},
                               {"max_discrepancy", worst},
                               {"threshold", fail_threshold},
                               {"variant_rejected", rejected}};
    passed = passed && rejected;
  }

  // 4. convergence order of the measurement under dx, dt refinement
  if (get_bool(cfg, "include_convergence", true, "oracle")) {
    const double kbar = 1.5;
    auto measure = [&](double dx_c) {
      schrodinger::OracleSettings s;
      s.dx = dx_c;
      s.dt = dx_c * dx_c / 4.0;
      return schrodinger::transmission_of_packet(alpha, kbar, v, s).transmission;
    };
    const double ref = measured_at_1p5 >= 0.0 ? measured_at_1p5 : [&] {
      schrodinger::OracleSettings s;
      s.dx = dx;
      s.dt = dt;
      return schrodinger::transmission_of_packet(alpha, kbar, v, s).transmission;
    }();
    const double coarse = measure(0.4);
    const double fine = measure(0.2);
    const double e_coarse = std::abs(coarse - ref);
    const double e_fine = std::abs(fine - ref);
    const double order = std::log2(e_coarse / std::max(e_fine, 1e-15));
    const bool ok = order >= 1.8;
    report["convergence"] = {{"kbar", kbar},          {"reference", ref},
                             {"coarse_dx", 0.4},      {"coarse", coarse},
                             {"fine_dx", 0.2},        {"fine", fine},
                             {"observed_order", order}, {"pass", ok}};
    passed = passed && ok;
  }

  // 5. departure from the coherent manifold
  if (get_bool(cfg, "include_fidelity_demo", true, "oracle")) {
    const double fid_alpha = 4.0;
    schrodinger::Grid grid(-60.0, 80.0, 2801);
    auto state = schrodinger::init_gaussian(grid, fid_alpha, -15.0, 1.0);
    const auto fresh = schrodinger::fidelity_to_family(grid, state, fid_alpha);

    const schrodinger::CrankNicolson cn(grid, v, 2e-3);
    std::vector<schrodinger::GridState> snaps;
    for (int leg = 0; leg < 12; ++leg) {
      for (int i = 0; i < 500; ++i) cn.step(state);
      snaps.push_back(state);
    }
    const auto scattered = schrodinger::fidelity_to_family(grid, state, fid_alpha);
    schrodinger::write_track_csv((out_dir / "fidelity_track.csv").string(),
                                 schrodinger::ehrenfest_track(grid, snaps));

    const bool ok = fresh.fidelity >= 1.0 - 1e-8 && scattered.fidelity < 0.99;
    report["fidelity_demo"] = {{"alpha", fid_alpha},
                               {"fresh_fidelity", fresh.fidelity},
                               {"scattered_fidelity", scattered.fidelity},
                               {"scattered_best_xbar", scattered.xbar},
                               {"scattered_best_kbar", scattered.kbar},
                               {"pass", ok}};
    passed = passed && ok;
  }

  report["passed"] = passed;
  {
    std::ofstream out(out_dir / "oracle_report.json");
    out << report.dump(1) << "\n";
  }

  RunResult result{out_dir, {"oracle_report.json"}, passed};
  if (get_bool(cfg, "include_fidelity_demo", true, "oracle"))
    result.outputs.push_back("fidelity_track.csv");
  result.outputs.push_back("manifest.json");
  write_manifest(out_dir, "oracle", cfg, result.outputs, {});
  return result;
}

RunResult cmd_algebra_report(const json& user, const fs::path& out_dir, int threads) {
  (void)threads;
  const json cfg = merged(default_config("algebra-report"), user);
  reject_unknown_keys(cfg, {"fixture", "rho"}, "algebra-report");
  const std::string fixture = get_string(cfg, "fixture", "", "algebra-report");

  fs::create_directories(out_dir);
  std::vector<fs::path> fixture_files;

  json report;
  std::optional<algebra::StructureConstants> sc;
  std::optional<algebra::MatrixRepresentation> rep;
  if (fixture.empty()) {
    sc = rotor::rma_structure_constants();
    report["source"] = "builtin:rma";
  } else {
    auto doc = algebra::load_algebra_document(fixture);
    sc = std::move(doc.constants);
    rep = std::move(doc.representation);
    fixture_files.push_back(fixture);
    report["source"] = fixture;
  }

  const auto rho_list = get_number_list(cfg, "rho", {}, "algebra-report", false);
  if (static_cast<int>(rho_list.size()) != sc->dim())
    throw ConfigError("config: algebra-report.rho must have dim = " +
                      std::to_string(sc->dim()) + " entries");
  Eigen::VectorXd rho(sc->dim());
  for (int i = 0; i < sc->dim(); ++i) rho[i] = rho_list[i];

  report["dim"] = sc->dim();
  report["antisymmetry_residual"] = sc->antisymmetry_residual();
  report["jacobi_residual"] = sc->jacobi_residual();

  const auto oa = algebra::orbit_analysis(*sc, rho);
  report["rank"] = oa.rank;
  json kernel = json::array();
  for (int c = 0; c < oa.kernel.cols(); ++c) {
    json col = json::array();
    for (int r = 0; r < oa.kernel.rows(); ++r) col.push_back(oa.kernel(r, c));
    kernel.push_back(col);
  }
  report["kernel_basis"] = kernel;

  if (rep) {
    report["representation"] = {{"hilbert_dim", rep->hilbert_dim()},
                                {"hermiticity_residual", rep->hermiticity_residual()},
                                {"closure_residual", rep->closure_residual(*sc)}};
  }

  {
    std::ofstream out(out_dir / "algebra_report.json");
    out << report.dump(1) << "\n";
  }

  RunResult result{out_dir, {"algebra_report.json", "manifest.json"}, true};
  write_manifest(out_dir, "algebra-report", cfg, result.outputs, fixture_files);
  return result;
}

RunResult run_command(const std::string& command, const json& config,
                      const fs::path& out_dir, int threads) {
  if (command == "fig1") return cmd_fig1(config, out_dir, threads);
  if (command == "fig2") return cmd_fig2(config, out_dir, threads);
  if (command == "rotor") return cmd_rotor(config, out_dir, threads);
  if (command == "oracle") return cmd_oracle(config, out_dir, threads);
  if (command == "algebra-report") return cmd_algebra_report(config, out_dir, threads);
  throw ConfigError("unknown command: " + command);
}

}  // namespace cqd::cli
