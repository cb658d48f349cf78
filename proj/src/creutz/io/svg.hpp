#pragma once

#include <string>
#include <vector>

namespace creutz::io {

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;                    // points instead of a polyline
  std::vector<std::string> point_colors;   // per-point marker fill, optional
  std::string label;
};

// Minimal x/y plot with axes, tick labels and a legend.
struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  bool equal_aspect = false;

  std::string render(int width = 640, int height = 440) const;
};

/// Blue (-1) through grey (0) to red (+1).
std::string diverging_color(double value);

}  // namespace creutz::io
