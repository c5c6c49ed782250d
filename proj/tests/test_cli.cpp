#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cqd/cli/commands.hpp"
#include "cqd/cli/config.hpp"
#include "cqd/cli/csv.hpp"

using namespace cqd::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("cqdlab_test_" + tag);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -0.25, 1.0 / 3.0, 6.626e-34, 1e300, -3.14159265358979}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("fig1: outputs, defaults, schema errors") {
  const auto dir = fresh_dir("fig1");
  json cfg;
  cfg["alphas"] = {0.25, 2.0};
  cfg["xbar"] = {{"min", -4.0}, {"max", 12.0}, {"n", 81}};
  const auto result = cmd_fig1(cfg, dir, 2);

  CHECK(fs::exists(dir / "fig1.csv"));
  CHECK(fs::exists(dir / "fig1.svg"));
  CHECK(fs::exists(dir / "manifest.json"));

  const std::string csv = slurp(dir / "fig1.csv");
  CHECK(csv.rfind("xbar,Vbar,alpha,V0,L\n", 0) == 0);

  // schema violations
  json bad;
  bad["alphas"] = json::array();
  CHECK_THROWS_AS(cmd_fig1(bad, fresh_dir("fig1_bad"), 1), ConfigError);
  json neg;
  neg["alphas"] = {-1.0};
  CHECK_THROWS_AS(cmd_fig1(neg, fresh_dir("fig1_neg"), 1), ConfigError);
  json unknown;
  unknown["alpha"] = 1.0;  // typo for alphas
  CHECK_THROWS_AS(cmd_fig1(unknown, fresh_dir("fig1_unk"), 1), ConfigError);
}

TEST_CASE("fig1 determinism: byte-identical reruns") {
  const auto d1 = fresh_dir("det1");
  const auto d2 = fresh_dir("det2");
  json cfg;
  cfg["alphas"] = {0.5, 1.0};
  cfg["xbar"] = {{"min", -2.0}, {"max", 10.0}, {"n", 61}};
  cmd_fig1(cfg, d1, 1);
  cmd_fig1(cfg, d2, 3);  // different worker count must not matter
  for (const char* f : {"fig1.csv", "fig1.svg", "manifest.json"})
    CHECK(slurp(d1 / f) == slurp(d2 / f));
}

TEST_CASE("fig2: per-mode curves and panels") {
  const auto dir = fresh_dir("fig2");
  json cfg;
  cfg["modes"] = {"icm", "cm", "qm", "qm_avg"};
  cfg["alphas"] = {4.0};
  cfg["k"] = {{"min", 0.1}, {"max", 2.0}, {"n", 39}};
  const auto result = cmd_fig2(cfg, dir, 4);

  CHECK(fs::exists(dir / "fig2_icm.csv"));
  CHECK(fs::exists(dir / "fig2_cm_a4.csv"));
  CHECK(fs::exists(dir / "fig2_qm.csv"));
  CHECK(fs::exists(dir / "fig2_qm_avg_a4.csv"));
  CHECK(fs::exists(dir / "fig2_classical.svg"));
  CHECK(fs::exists(dir / "fig2_quantum.svg"));

  // icm curve is the unit step at k = 1
  std::ifstream in(dir / "fig2_icm.csv");
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const double k = std::stod(line.substr(0, line.find(',')));
    const size_t c1 = line.find(',');
    const double t = std::stod(line.substr(c1 + 1, line.find(',', c1 + 1) - c1 - 1));
    CHECK(t == (k > 1.0 ? 1.0 : 0.0));
  }

  json bad;
  bad["modes"] = {"icm", "nope"};
  CHECK_THROWS_AS(cmd_fig2(bad, fresh_dir("fig2_bad"), 1), ConfigError);
}

TEST_CASE("fig2 cqm mode approximates the ideal step for small alpha") {
  const auto dir = fresh_dir("fig2cqm");
  json cfg;
  cfg["modes"] = {"cqm"};
  cfg["alphas"] = {0.25};
  cfg["k"] = {{"min", 0.3}, {"max", 1.9}, {"n", 9}};  // avoids k = 1 and 0.95/1.05
  const auto result = cmd_fig2(cfg, dir, 4);
  CHECK(fs::exists(dir / "fig2_cqm_a0.25.csv"));

  std::ifstream in(dir / "fig2_cqm_a0.25.csv");
  std::string line;
  std::getline(in, line);
  int checked = 0;
  while (std::getline(in, line)) {
    const double k = std::stod(line.substr(0, line.find(',')));
    const size_t c1 = line.find(',');
    const double t = std::stod(line.substr(c1 + 1, line.find(',', c1 + 1) - c1 - 1));
    if (std::abs(k - 1.0) > 0.06) {
      CHECK(t == (k > 1.0 ? 1.0 : 0.0));
      ++checked;
    }
  }
  CHECK(checked >= 8);
}

TEST_CASE("rotor command emits trajectory, conservation and geometry") {
  const auto dir = fresh_dir("rotor");
  json cfg;
  cfg["t_span"] = 20.0;
  cfg["samples"] = 41;
  const auto result = cmd_rotor(cfg, dir, 1);

  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "conservation.json"));
  CHECK(fs::exists(dir / "geometry.json"));
  CHECK(fs::exists(dir / "rotor.svg"));

  json cons;
  std::ifstream(dir / "conservation.json") >> cons;
  CHECK(cons["max_abs_dH"].get<double>() <= cons["bound"].get<double>());
  CHECK(cons["max_rel_dH"].get<double>() < 1e-7);

  json geom;
  std::ifstream(dir / "geometry.json") >> geom;
  CHECK(geom["manifold_dim"] == 9);
  CHECK(geom["orbit_dim"] == 6);
  CHECK(geom["kernel_is_diagonal_moments"] == true);

  const std::string csv = slurp(dir / "trajectory.csv");
  CHECK(csv.rfind("t,L1,L2,L3,R11,R12,R13,R21,R22,R23,R31,R32,R33,H,Lsq\n", 0) == 0);

  json bad;
  bad["moments"] = {1.0, 2.0};
  CHECK_THROWS_AS(cmd_rotor(bad, fresh_dir("rotor_bad"), 1), ConfigError);
}

TEST_CASE("algebra-report on the builtin rma and on a fixture file") {
  const auto dir = fresh_dir("areport");
  const auto result = cmd_algebra_report(json::object(), dir, 1);
  json rep;
  std::ifstream(dir / "algebra_report.json") >> rep;
  CHECK(rep["dim"] == 9);
  CHECK(rep["rank"] == 6);
  CHECK(rep["jacobi_residual"].get<double>() < 1e-12);

  const auto dir2 = fresh_dir("areport2");
  json cfg;
  cfg["fixture"] = std::string(CQD_DATA_DIR) + "/spin1.json";
  cfg["rho"] = {0.0, 0.0, 1.0};
  cmd_algebra_report(cfg, dir2, 1);
  json rep2;
  std::ifstream(dir2 / "algebra_report.json") >> rep2;
  CHECK(rep2["dim"] == 3);
  CHECK(rep2["rank"] == 2);
  CHECK(rep2["representation"]["closure_residual"].get<double>() < 1e-10);

  json manifest;
  std::ifstream(dir2 / "manifest.json") >> manifest;
  CHECK(manifest["fixtures"].contains("spin1.json"));
  const std::string checksum = manifest["fixtures"]["spin1.json"].get<std::string>();
  CHECK(checksum.rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("exit-status contract of the binary") {
  // the test runs from the build directory where the cqdlab binary lives
  if (!fs::exists("cqdlab")) {
    MESSAGE("cqdlab binary not found next to the test; skipping");
    return;
  }
  auto run = [](const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  const auto dir = fresh_dir("exitcodes");
  CHECK(run("./cqdlab fig1 --out " + (dir / "ok").string()) == 0);

  std::ofstream bad_cfg(dir / "bad.json");
  bad_cfg << "{\"alphas\": []}";
  bad_cfg.close();
  CHECK(run("./cqdlab fig1 --config " + (dir / "bad.json").string() + " --out " +
            (dir / "bad").string()) == 2);
  CHECK(run("./cqdlab fig1 --config " + (dir / "missing.json").string() + " --out " +
            (dir / "x").string()) == 2);
}

TEST_CASE("manifest is deterministic and lists every output") {
  const auto d1 = fresh_dir("man1");
  const auto d2 = fresh_dir("man2");
  json cfg;
  cfg["modes"] = {"icm", "qm"};
  cfg["k"] = {{"min", 0.2}, {"max", 1.8}, {"n", 17}};
  const auto r1 = cmd_fig2(cfg, d1, 1);
  const auto r2 = cmd_fig2(cfg, d2, 2);
  CHECK(slurp(d1 / "manifest.json") == slurp(d2 / "manifest.json"));

  json manifest;
  std::ifstream(d1 / "manifest.json") >> manifest;
  for (const auto& f : r1.outputs) {
    CHECK(fs::exists(d1 / f));
    bool listed = false;
    for (const auto& o : manifest["outputs"])
      if (o.get<std::string>() == f) listed = true;
    CHECK(listed);
  }
}
