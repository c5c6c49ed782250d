// cqdlab: batch front end for the constrained-quantum-dynamics laboratory.
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cqd/cli/commands.hpp"
#include "cqd/cli/config.hpp"
#include "cqd/errors.hpp"
#include "cqd/version.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  long seed = 0;  // reserved; all current computations are deterministic
};

int run(const std::string& command, const CommonOpts& opts) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  try {
    nlohmann::json config = nlohmann::json::object();
    if (!opts.config_path.empty())
      config = cqd::cli::load_config_file(opts.config_path);

    const std::string out =
        opts.out_dir.empty() ? ("out/" + command) : opts.out_dir;
    const auto result = cqd::cli::run_command(command, config, out, opts.threads);

    const double ms =
        std::chrono::duration<double, std::milli>(clock::now() - start).count();
    std::fprintf(stderr, "[cqdlab] %s finished in %.0f ms, %zu outputs in %s\n",
                 command.c_str(), ms, result.outputs.size(),
                 result.out_dir.string().c_str());
    if (!result.suite_passed) {
      std::fprintf(stderr, "[cqdlab] %s: validation suite FAILED\n", command.c_str());
      return 4;
    }
    return 0;
  } catch (const cqd::cli::ConfigError& e) {
    std::fprintf(stderr, "[cqdlab] config error: %s\n", e.what());
    return 2;
  } catch (const cqd::ValidationError& e) {
    std::fprintf(stderr, "[cqdlab] config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[cqdlab] numerical failure: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cqdlab: barrier transmission, coadjoint orbits and rigid-body "
               "dynamics as constrained quantum dynamics"};
  app.set_version_flag("--version", std::string("cqdlab ") + cqd::kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  std::string picked;
  for (const auto& name : {"fig1", "fig2", "rotor", "oracle", "algebra-report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config_path, "JSON run configuration");
    sub->add_option("--out", opts.out_dir, "output directory (default out/<command>)");
    sub->add_option("--threads", opts.threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "reserved");
    sub->callback([&picked, name]() { picked = name; });
  }
  app.get_subcommand("fig1")->description("smeared-potential curves (paper figure 1)");
  app.get_subcommand("fig2")->description("transmission-probability curves (paper figure 2)");
  app.get_subcommand("rotor")->description("asymmetric-top trajectories and orbit geometry");
  app.get_subcommand("oracle")->description("time-dependent validation campaign");
  app.get_subcommand("algebra-report")->description("structure-constant and orbit report");

  CLI11_PARSE(app, argc, argv);
  return run(picked, opts);
}
