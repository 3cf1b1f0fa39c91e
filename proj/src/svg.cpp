#include "cellsp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cellsp/errors.hpp"

namespace cellsp {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 24, kTop = 44, kBottom = 52;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escapeXml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string shortNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void widen(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void finalize() {
    if (!(lo <= hi)) {
      lo = 0;
      hi = 1;
    } else if (lo == hi) {
      const double pad = lo == 0 ? 1 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }

  double fraction(double v) const { return (v - lo) / (hi - lo); }
};

} // namespace

std::string renderChart(const PolylineChart& chart) {
  Range xRange, yRange;
  for (const ChartSeries& s : chart.series) {
    if (s.x.size() != s.y.size())
      throw ShapeError("chart series '" + s.name + "': x and y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        xRange.widen(s.x[i]);
        yRange.widen(s.y[i]);
      }
  }
  xRange.finalize();
  yRange.finalize();

  const double plotW = kWidth - kLeft - kRight;
  const double plotH = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + xRange.fraction(v) * plotW; };
  const auto py = [&](double v) { return kHeight - kBottom - yRange.fraction(v) * plotH; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escapeXml(chart.title) << "</text>\n";

  svg << "<g stroke=\"#444\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
      << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kHeight - kBottom << "\"/>\n</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    const double xv = xRange.lo + f * (xRange.hi - xRange.lo);
    const double yv = yRange.lo + f * (yRange.hi - yRange.lo);
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px(xv)
        << "\" y2=\"" << kHeight - kBottom + 4 << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << px(xv) << "\" y=\"" << kHeight - kBottom + 17
        << "\" text-anchor=\"middle\">" << shortNumber(xv) << "</text>\n"
        << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << py(yv) << "\" x2=\"" << kLeft
        << "\" y2=\"" << py(yv) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << kLeft - 7 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\">" << shortNumber(yv) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plotW / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escapeXml(chart.xLabel) << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + plotH / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << kTop + plotH / 2 << ")\">" << escapeXml(chart.yLabel) << "</text>\n</g>\n";

  std::size_t colorIndex = 0;
  for (const ChartSeries& s : chart.series) {
    const char* color = kPalette[colorIndex % kPaletteSize];
    std::ostringstream points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      points << px(s.x[i]) << "," << py(s.y[i]) << " ";
      svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.5\" fill=\""
          << color << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\""
        << points.str() << "\"/>\n";
    const double ly = kTop + 6 + 16 * double(colorIndex);
    svg << "<line x1=\"" << kWidth - kRight - 150 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kRight - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n"
        << "<text x=\"" << kWidth - kRight - 120 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escapeXml(s.name)
        << "</text>\n";
    ++colorIndex;
  }
  svg << "</svg>\n";
  return svg.str();
}

void writeChartFile(const PolylineChart& chart, const std::string& path) {
  const std::string content = renderChart(chart);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
}

} // namespace cellsp
