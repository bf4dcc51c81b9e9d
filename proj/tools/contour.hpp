#pragma once

// Zero-set rendering for the plot command: marching squares on a regular grid
// over an affine window, emitted as SVG 1.1. Presentation only.

#include <functional>
#include <string>
#include <vector>

namespace poncelet::cli {

struct Window {
  double x0 = -3, y0 = -3, x1 = 3, y1 = 3;
};

/// Parses "x0,y0,x1,y1"; throws std::invalid_argument on malformed or empty windows.
Window parse_window(const std::string& text);

struct Segment {
  double ax, ay, bx, by;
};

/// Sign-change segments of f over a grid x grid cell decomposition of w.
std::vector<Segment> contour(const std::function<double(double, double)>& f, const Window& w, int grid);

struct PlotLayer {
  std::string name;
  std::string note;  ///< e.g. the chart; goes into the layer's <desc>
  std::vector<Segment> segments;
};

std::string render_svg(const std::vector<PlotLayer>& layers, const Window& w);

}  // namespace poncelet::cli
