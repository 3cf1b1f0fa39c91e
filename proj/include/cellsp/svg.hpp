#pragma once

#include <string>
#include <vector>

namespace cellsp {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PolylineChart {
  std::string title;
  std::string xLabel;
  std::string yLabel;
  std::vector<ChartSeries> series;
};

// Self-contained SVG document; non-finite points are dropped.
std::string renderChart(const PolylineChart& chart);

void writeChartFile(const PolylineChart& chart, const std::string& path);

} // namespace cellsp
