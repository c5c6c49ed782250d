#include "cqd/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "cqd/errors.hpp"
#include "cqd/version.hpp"

namespace cqd::cli {
namespace {

constexpr double kWidth = 860, kHeight = 540;
constexpr double kLeft = 70, kRight = 840, kTop = 50, kBottom = 490;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// round a raw tick spacing to 1/2/5 x 10^n
double nice_step(double range) {
  const double raw = range / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2.0 * mag;
  if (r < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const LineChart& chart) {
  if (!(chart.x_max > chart.x_min) || !(chart.y_max > chart.y_min))
    throw ValidationError("svg: empty axis range");

  std::ofstream out(path);
  if (!out) throw ValidationError("svg: cannot open " + path.string());

  auto px = [&](double x) {
    return kLeft + (x - chart.x_min) / (chart.x_max - chart.x_min) * (kRight - kLeft);
  };
  auto py = [&](double y) {
    return kBottom - (y - chart.y_min) / (chart.y_max - chart.y_min) * (kBottom - kTop);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<!-- generator: cqdlab-svg/" << cqd::kVersion << " -->\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" font-size=\"18\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">"
      << chart.title << "</text>\n";

  // axes
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";

  const double xstep = nice_step(chart.x_max - chart.x_min);
  for (double x = std::ceil(chart.x_min / xstep) * xstep; x <= chart.x_max + 1e-12;
       x += xstep) {
    out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kBottom << "\" x2=\"" << fmt(px(x))
        << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kBottom + 22
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" << fmt(x)
        << "</text>\n";
  }
  const double ystep = nice_step(chart.y_max - chart.y_min);
  for (double y = std::ceil(chart.y_min / ystep) * ystep; y <= chart.y_max + 1e-12;
       y += ystep) {
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 10 << "\" y=\"" << fmt(py(y) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(y)
        << "</text>\n";
  }

  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 8
      << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << chart.x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 "
      << (kTop + kBottom) / 2 << ")\">" << chart.y_label << "</text>\n";

  for (size_t s = 0; s < chart.series.size(); ++s) {
    const Series& ser = chart.series[s];
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < ser.x.size(); ++i) {
      const double cx = std::clamp(ser.x[i], chart.x_min, chart.x_max);
      const double cy = std::clamp(ser.y[i], chart.y_min, chart.y_max);
      out << fmt(px(cx)) << "," << fmt(py(cy)) << " ";
    }
    out << "\"/>\n";
    // legend
    const double ly = kTop + 18.0 * s;
    out << "<line x1=\"" << kRight - 150 << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << kRight - 120 << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kRight - 114 << "\" y=\"" << fmt(ly + 4)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << ser.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace cqd::cli
