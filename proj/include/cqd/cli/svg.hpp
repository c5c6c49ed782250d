#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cqd::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  std::vector<Series> series;
};

// Static polyline plot with a fixed viewBox and no external assets; output is
// deterministic apart from nothing (the generator version string is a
// constant).
void write_line_chart(const std::filesystem::path& path, const LineChart& chart);

}  // namespace cqd::cli
