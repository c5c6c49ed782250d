#include "cqd/cli/config.hpp"

#include <algorithm>
#include <fstream>

namespace cqd::cli {

using nlohmann::json;

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  try {
    json j;
    in >> j;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    return j;
  } catch (const json::exception& e) {
    throw ConfigError("config: invalid JSON in " + path.string() + ": " + e.what());
  }
}

double get_number(const json& j, const std::string& key, double fallback,
                  const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError("config: " + where + "." + key + " must be a number");
  return j[key].get<double>();
}

double get_positive(const json& j, const std::string& key, double fallback,
                    const std::string& where) {
  const double v = get_number(j, key, fallback, where);
  if (!(v > 0)) throw ConfigError("config: " + where + "." + key + " must be positive");
  return v;
}

int get_int(const json& j, const std::string& key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ConfigError("config: " + where + "." + key + " must be an integer");
  return j[key].get<int>();
}

bool get_bool(const json& j, const std::string& key, bool fallback,
              const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean())
    throw ConfigError("config: " + where + "." + key + " must be a boolean");
  return j[key].get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback,
                       const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string())
    throw ConfigError("config: " + where + "." + key + " must be a string");
  return j[key].get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& key,
                                    const std::vector<double>& fallback,
                                    const std::string& where, bool require_positive,
                                    bool allow_empty) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array())
    throw ConfigError("config: " + where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number())
      throw ConfigError("config: " + where + "." + key + " must contain only numbers");
    out.push_back(v.get<double>());
    if (require_positive && !(out.back() > 0))
      throw ConfigError("config: " + where + "." + key + " entries must be positive");
  }
  if (out.empty() && !allow_empty)
    throw ConfigError("config: " + where + "." + key + " must not be empty");
  return out;
}

std::vector<std::string> get_string_list(const json& j, const std::string& key,
                                         const std::vector<std::string>& fallback,
                                         const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array())
    throw ConfigError("config: " + where + "." + key + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j[key]) {
    if (!v.is_string())
      throw ConfigError("config: " + where + "." + key + " must contain only strings");
    out.push_back(v.get<std::string>());
  }
  if (out.empty())
    throw ConfigError("config: " + where + "." + key + " must not be empty");
  return out;
}

std::vector<double> get_grid(const json& j, const std::string& key, double fallback_min,
                             double fallback_max, int fallback_n, const std::string& where) {
  double lo = fallback_min, hi = fallback_max;
  int n = fallback_n;
  if (j.contains(key)) {
    const auto& g = j[key];
    if (!g.is_object())
      throw ConfigError("config: " + where + "." + key + " must be {min, max, n}");
    lo = get_number(g, "min", fallback_min, where + "." + key);
    hi = get_number(g, "max", fallback_max, where + "." + key);
    n = get_int(g, "n", fallback_n, where + "." + key);
  }
  if (!(hi > lo)) throw ConfigError("config: " + where + "." + key + ".max must exceed .min");
  if (n < 2) throw ConfigError("config: " + where + "." + key + ".n must be at least 2");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("config: unknown key " + where + "." + it.key());
  }
}

}  // namespace cqd::cli
