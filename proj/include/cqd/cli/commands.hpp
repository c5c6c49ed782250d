#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace cqd::cli {

struct RunResult {
  std::filesystem::path out_dir;
  std::vector<std::string> outputs;
  bool suite_passed = true;  // used by the oracle validation campaign
};

// Built-in defaults for each subcommand; a user config overrides per key.
nlohmann::json default_config(const std::string& command);

RunResult cmd_fig1(const nlohmann::json& config, const std::filesystem::path& out_dir,
                   int threads);
RunResult cmd_fig2(const nlohmann::json& config, const std::filesystem::path& out_dir,
                   int threads);
RunResult cmd_rotor(const nlohmann::json& config, const std::filesystem::path& out_dir,
                    int threads);
RunResult cmd_oracle(const nlohmann::json& config, const std::filesystem::path& out_dir,
                     int threads);
RunResult cmd_algebra_report(const nlohmann::json& config,
                             const std::filesystem::path& out_dir, int threads);

// Dispatch by subcommand name ("fig1", "fig2", "rotor", "oracle",
// "algebra-report").
RunResult run_command(const std::string& command, const nlohmann::json& config,
                      const std::filesystem::path& out_dir, int threads);

}  // namespace cqd::cli
