#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "dimred/core.hpp"

// Minimal deterministic SVG scatter plots: projection, parity and caseweight
// views. Train and test cases get different colors; robust case classes get
// different symbols (circle / triangle / cross).

namespace dimred::svgplot {

struct Point {
  double x = 0.0;
  double y = 0.0;
  int cls = 0;       // 0 regular, 1 moderate, 2 harsh
  bool test = false;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool identity_line = false;            // y = x reference (parity plots)
  std::vector<double> hlines;            // horizontal guides (caseweight cutoffs)
  double y_min_hint = 0.0, y_max_hint = 0.0;
  bool use_y_hint = false;
};

namespace detail {

inline constexpr int kWidth = 640;
inline constexpr int kHeight = 480;
inline constexpr int kMarginLeft = 64;
inline constexpr int kMarginRight = 24;
inline constexpr int kMarginTop = 40;
inline constexpr int kMarginBottom = 52;

inline const char* kTrainColor = "#1f77b4";
inline const char* kTestColor = "#ff7f0e";

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  double map(double v, double a, double b) const {
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

inline Range padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    const double c = lo;
    return {c - 1.0, c + 1.0};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

inline void marker(std::string& out, double x, double y, int cls, const char* color) {
  char buf[256];
  switch (cls) {
    case 1:  // moderate: triangle
      std::snprintf(buf, sizeof(buf),
                    "<path d=\"M %s %s L %s %s L %s %s Z\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.2\"/>\n",
                    fmt(x).c_str(), fmt(y - 4.5).c_str(), fmt(x - 4).c_str(),
                    fmt(y + 3.5).c_str(), fmt(x + 4).c_str(), fmt(y + 3.5).c_str(), color);
      break;
    case 2:  // harsh: cross
      std::snprintf(buf, sizeof(buf),
                    "<path d=\"M %s %s L %s %s M %s %s L %s %s\" stroke=\"%s\" stroke-width=\"1.4\"/>\n",
                    fmt(x - 3.5).c_str(), fmt(y - 3.5).c_str(), fmt(x + 3.5).c_str(),
                    fmt(y + 3.5).c_str(), fmt(x - 3.5).c_str(), fmt(y + 3.5).c_str(),
                    fmt(x + 3.5).c_str(), fmt(y - 3.5).c_str(), color);
      break;
    default:  // regular: circle
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%s\" cy=\"%s\" r=\"3\" fill=\"%s\" fill-opacity=\"0.75\"/>\n",
                    fmt(x).c_str(), fmt(y).c_str(), color);
  }
  out += buf;
}

}  // namespace detail

inline std::string scatter_svg(const std::vector<Point>& points, const PlotSpec& spec) {
  using namespace detail;
  double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
  if (!points.empty()) {
    xlo = xhi = points.front().x;
    ylo = yhi = points.front().y;
    for (const auto& p : points) {
      xlo = std::min(xlo, p.x);
      xhi = std::max(xhi, p.x);
      ylo = std::min(ylo, p.y);
      yhi = std::max(yhi, p.y);
    }
  }
  for (double h : spec.hlines) {
    ylo = std::min(ylo, h);
    yhi = std::max(yhi, h);
  }
  if (spec.use_y_hint) {
    ylo = std::min(ylo, spec.y_min_hint);
    yhi = std::max(yhi, spec.y_max_hint);
  }
  if (spec.identity_line) {
    const double lo = std::min(xlo, ylo), hi = std::max(xhi, yhi);
    xlo = ylo = lo;
    xhi = yhi = hi;
  }
  const Range rx = padded_range(xlo, xhi);
  const Range ry = padded_range(ylo, yhi);

  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;  // y grows upward

  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                kWidth, kHeight, kWidth, kHeight);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes.
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n",
                fmt(x0).c_str(), fmt(y0).c_str(), fmt(x1).c_str(), fmt(y0).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n",
                fmt(x0).c_str(), fmt(y0).c_str(), fmt(x0).c_str(), fmt(y1).c_str());
  out += buf;

  // Ticks and labels.
  for (int k = 0; k <= 4; ++k) {
    const double fx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
    const double px = rx.map(fx, x0, x1);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n"
                  "<text x=\"%s\" y=\"%s\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                  fmt(px).c_str(), fmt(y0).c_str(), fmt(px).c_str(), fmt(y0 + 5).c_str(),
                  fmt(px).c_str(), fmt(y0 + 18).c_str(), fmt_tick(fx).c_str());
    out += buf;
    const double fy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
    const double py = ry.map(fy, y0, y1);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n"
                  "<text x=\"%s\" y=\"%s\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                  fmt(x0 - 5).c_str(), fmt(py).c_str(), fmt(x0).c_str(), fmt(py).c_str(),
                  fmt(x0 - 8).c_str(), fmt(py + 4).c_str(), fmt_tick(fy).c_str());
    out += buf;
  }

  std::snprintf(buf, sizeof(buf),
                "<text x=\"%s\" y=\"%s\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                fmt(0.5 * (x0 + x1)).c_str(), fmt(kHeight - 12).c_str(), spec.xlabel.c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"16\" y=\"%s\" font-size=\"13\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 16 %s)\">%s</text>\n",
                fmt(0.5 * (y0 + y1)).c_str(), fmt(0.5 * (y0 + y1)).c_str(), spec.ylabel.c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%s\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">%s</text>\n",
                fmt(0.5 * (x0 + x1)).c_str(), spec.title.c_str());
  out += buf;

  if (spec.identity_line) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#888888\" "
                  "stroke-dasharray=\"4 3\"/>\n",
                  fmt(rx.map(rx.lo, x0, x1)).c_str(), fmt(ry.map(rx.lo, y0, y1)).c_str(),
                  fmt(rx.map(rx.hi, x0, x1)).c_str(), fmt(ry.map(rx.hi, y0, y1)).c_str());
    out += buf;
  }
  for (double hline : spec.hlines) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#aa3333\" "
                  "stroke-dasharray=\"5 4\"/>\n",
                  fmt(x0).c_str(), fmt(ry.map(hline, y0, y1)).c_str(), fmt(x1).c_str(),
                  fmt(ry.map(hline, y0, y1)).c_str());
    out += buf;
  }

  for (const auto& p : points) {
    detail::marker(out, rx.map(p.x, x0, x1), ry.map(p.y, y0, y1), p.cls,
                   p.test ? detail::kTestColor : detail::kTrainColor);
  }

  out += "</svg>\n";
  return out;
}

}  // namespace dimred::svgplot
