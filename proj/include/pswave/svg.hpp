#pragma once

// Minimal SVG line plots for diagnostics (profile with envelopes, log residual).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace pswave::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::string y_label;
  std::vector<Series> series;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

/// Stacks the panels vertically, each with its own y range and a shared x range.
inline std::string render(const std::vector<Panel>& panels, double width = 800.0, double panel_height = 300.0) {
  using detail::num;
  const double ml = 70.0, mr = 150.0, mt = 30.0, mb = 40.0;
  const double height = panel_height * static_cast<double>(panels.size());
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const Panel& p = panels[k];
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : p.series) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, s.y[i]);
        y1 = std::max(y1, s.y[i]);
      }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double top = panel_height * static_cast<double>(k) + mt;
    const double w = width - ml - mr, h = panel_height - mt - mb;
    const auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * w; };
    const auto Y = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * h; };

    out += "<text x=\"" + num(ml) + "\" y=\"" + num(top - 10.0) + "\" font-size=\"13\">" + p.title + "</text>\n";
    out += "<rect x=\"" + num(ml) + "\" y=\"" + num(top) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double fy = y0 + (y1 - y0) * t / 4.0;
      const double fx = x0 + (x1 - x0) * t / 4.0;
      out += "<text x=\"" + num(ml - 5.0) + "\" y=\"" + num(Y(fy) + 4.0) + "\" text-anchor=\"end\">" +
             detail::tick(fy) + "</text>\n";
      out += "<text x=\"" + num(X(fx)) + "\" y=\"" + num(top + h + 15.0) + "\" text-anchor=\"middle\">" +
             detail::tick(fx) + "</text>\n";
    }
    out += "<text x=\"15\" y=\"" + num(top + h / 2.0) + "\" transform=\"rotate(-90 15 " + num(top + h / 2.0) +
           ")\" text-anchor=\"middle\">" + p.y_label + "</text>\n";
    for (std::size_t j = 0; j < p.series.size(); ++j) {
      const auto& s = p.series[j];
      std::string d;
      bool pen = false;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.y[i])) {
          pen = false;
          continue;
        }
        d += (pen ? "L" : "M") + num(X(s.x[i])) + " " + num(Y(s.y[i]));
        pen = true;
      }
      out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\"/>\n";
      const double ly = top + 15.0 * static_cast<double>(j + 1);
      out += "<line x1=\"" + num(ml + w + 10.0) + "\" y1=\"" + num(ly - 4.0) + "\" x2=\"" + num(ml + w + 30.0) +
             "\" y2=\"" + num(ly - 4.0) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
      out += "<text x=\"" + num(ml + w + 35.0) + "\" y=\"" + num(ly) + "\">" + s.label + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace pswave::svg
