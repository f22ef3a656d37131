#pragma once

#include <string>
#include <vector>

namespace jacobi::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Series {
  std::vector<Point> points;
  std::string color = "#1f77b4";
  bool line = true;
  bool markers = true;
};

struct HorizontalLine {
  double y = 0.0;
  std::string label;
  std::string color = "#d62728";
};

struct Band {
  double y0 = 0.0;
  double y1 = 0.0;
  std::string label;
};

/// Minimal line/scatter plot: axes with ticks, polylines, reference lines.
struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
  std::vector<HorizontalLine> lines;
  std::vector<Band> bands;

  std::string render(int width = 640, int height = 420) const;
};

}  // namespace jacobi::svg
