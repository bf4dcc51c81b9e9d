#include "contour.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace poncelet::cli {

Window parse_window(const std::string& text) {
  std::array<double, 4> v{};
  std::istringstream in(text);
  for (int i = 0; i < 4; ++i) {
    char sep = ',';
    if ((i > 0 && !(in >> sep)) || sep != ',' || !(in >> v[i])) throw std::invalid_argument("window: expected x0,y0,x1,y1");
  }
  if (!(in >> std::ws).eof()) throw std::invalid_argument("window: expected x0,y0,x1,y1");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("window: non-finite bound");
  if (!(v[0] < v[2] && v[1] < v[3])) throw std::invalid_argument("window: empty range");
  return {v[0], v[1], v[2], v[3]};
}

std::vector<Segment> contour(const std::function<double(double, double)>& f, const Window& w, int grid) {
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  const int n = grid + 1;
  const double dx = (w.x1 - w.x0) / grid, dy = (w.y1 - w.y0) / grid;
  std::vector<double> val(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) val[static_cast<std::size_t>(j) * n + i] = f(w.x0 + i * dx, w.y0 + j * dy);
  auto at = [&](int i, int j) { return val[static_cast<std::size_t>(j) * n + i]; };

  std::vector<Segment> out;
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      // corners counter-clockwise from bottom-left
      const std::array<double, 4> v{at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      const std::array<double, 4> cx{w.x0 + i * dx, w.x0 + (i + 1) * dx, w.x0 + (i + 1) * dx, w.x0 + i * dx};
      const std::array<double, 4> cy{w.y0 + j * dy, w.y0 + j * dy, w.y0 + (j + 1) * dy, w.y0 + (j + 1) * dy};
      bool finite = true;
      for (double x : v) finite = finite && std::isfinite(x);
      if (!finite) continue;
      int mask = 0;
      for (int k = 0; k < 4; ++k)
        if (v[k] >= 0) mask |= 1 << k;
      if (mask == 0 || mask == 15) continue;
      // crossing point on edge k (corner k to corner k+1)
      auto cross = [&](int k) {
        const int m = (k + 1) % 4;
        const double t = v[k] / (v[k] - v[m]);
        return std::array<double, 2>{cx[k] + t * (cx[m] - cx[k]), cy[k] + t * (cy[m] - cy[k])};
      };
      std::vector<int> edges;
      for (int k = 0; k < 4; ++k)
        if (((mask >> k) & 1) != ((mask >> ((k + 1) % 4)) & 1)) edges.push_back(k);
      if (edges.size() == 4) {
        // saddle: pair edges according to the sign at the centre
        const bool centre = (v[0] + v[1] + v[2] + v[3]) >= 0;
        const bool first = (mask & 1) != 0;
        if (centre == first)
          edges = {1, 0, 3, 2};
        else
          edges = {0, 3, 2, 1};
      }
      for (std::size_t e = 0; e + 1 < edges.size(); e += 2) {
        const auto a = cross(edges[e]), b = cross(edges[e + 1]);
        out.push_back({a[0], a[1], b[0], b[1]});
      }
    }
  return out;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x == 0 ? 0.0 : x);  // no "-0"
  return buf;
}

const char* const kPalette[] = {"#1f4e9c", "#b2182b", "#1b7837", "#762a83", "#e08214", "#4d4d4d"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string render_svg(const std::vector<PlotLayer>& layers, const Window& w) {
  const double width = w.x1 - w.x0, height = w.y1 - w.y0;
  std::ostringstream svg;
  // y grows upwards in the window, downwards in SVG: plot (x, -y).
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"512\" height=\"512\" viewBox=\"" << num(w.x0) << ' '
      << num(-w.y1) << ' ' << num(width) << ' ' << num(height) << "\" preserveAspectRatio=\"none\">\n";
  const std::string stroke = num(std::max(width, height) / 400);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    svg << "<g id=\"" << escape(layer.name) << "\" fill=\"none\" stroke=\"" << kPalette[l % std::size(kPalette)] << "\" stroke-width=\""
        << stroke << "\">\n";
    std::string note = layer.note;
    if (layer.segments.empty()) note += note.empty() ? "no real points in window" : "; no real points in window";
    if (!note.empty()) svg << "<desc>" << escape(note) << "</desc>\n";
    if (!layer.segments.empty()) {
      svg << "<path d=\"";
      for (std::size_t s = 0; s < layer.segments.size(); ++s) {
        const auto& seg = layer.segments[s];
        svg << (s ? " " : "") << 'M' << num(seg.ax) << ' ' << num(-seg.ay) << 'L' << num(seg.bx) << ' ' << num(-seg.by);
      }
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace poncelet::cli
