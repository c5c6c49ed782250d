#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cqd::cli {

// Shortest round-trip decimal representation (%.17g trimmed), so repeated
// runs emit byte-identical files.
std::string format_double(double v);

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace cqd::cli
