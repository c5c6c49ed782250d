#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cqd::cli {

// Schema violations in a run configuration; mapped to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json load_config_file(const std::filesystem::path& path);

// Validated extractors; `where` is the JSON-path-style location reported on
// failure.
double get_number(const nlohmann::json& j, const std::string& key, double fallback,
                  const std::string& where);
double get_positive(const nlohmann::json& j, const std::string& key, double fallback,
                    const std::string& where);
int get_int(const nlohmann::json& j, const std::string& key, int fallback,
            const std::string& where);
bool get_bool(const nlohmann::json& j, const std::string& key, bool fallback,
              const std::string& where);
std::string get_string(const nlohmann::json& j, const std::string& key,
                       const std::string& fallback, const std::string& where);
std::vector<double> get_number_list(const nlohmann::json& j, const std::string& key,
                                    const std::vector<double>& fallback,
                                    const std::string& where, bool require_positive,
                                    bool allow_empty = false);
std::vector<std::string> get_string_list(const nlohmann::json& j, const std::string& key,
                                         const std::vector<std::string>& fallback,
                                         const std::string& where);

// Uniform grid {"min":, "max":, "n":} -> explicit points.
std::vector<double> get_grid(const nlohmann::json& j, const std::string& key,
                             double fallback_min, double fallback_max, int fallback_n,
                             const std::string& where);

void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& known,
                         const std::string& where);

}  // namespace cqd::cli
