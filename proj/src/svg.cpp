// SPDX-License-Identifier: Apache-2.0
#include "exitlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "exitlab/errors.hpp"

namespace exitlab {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 20.0;
constexpr double kTop = 34.0;
constexpr double kBottom = 52.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

//! Fixed-width-free numeric label; %.4g is deterministic for a given libc,
//! which is all the byte-identity contract requires (same binary, same bytes).
std::string label_number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

std::string coord(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double place(double v, double pix_lo, double pix_hi) const {
    const double t = log ? (std::log(v) - std::log(lo)) / (std::log(hi) - std::log(lo))
                         : (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

Axis fit_axis(const std::vector<PlotSeries>& series, bool take_x, bool log_scale,
              const char* name) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const PlotSeries& s : series) {
    const std::vector<double>& vs = take_x ? s.xs : s.ys;
    for (double v : vs) {
      if (!std::isfinite(v)) {
        throw NumericalError(std::string("plot: non-finite ") + name + " value");
      }
      if (log_scale && !(v > 0.0)) {
        throw NumericalError(std::string("plot: log axis needs positive ") + name + " values");
      }
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (first) {
    throw ConfigError("plot: no data points");
  }
  if (lo == hi) {  // widen degenerate ranges so placement stays finite
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
    lo -= log_scale ? 0.0 : pad;
    hi += pad;
    if (log_scale) {
      lo /= 2.0;
    }
  }
  return Axis{lo, hi, log_scale};
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  if (series.empty()) {
    throw ConfigError("plot: need at least one series");
  }
  const Axis ax = fit_axis(series, true, spec.log_x, "x");
  const Axis ay = fit_axis(series, false, spec.log_y, "y");
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;  // SVG y grows downward

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"440\" "
         "viewBox=\"0 0 640 440\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"440\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" +
         spec.title + "</text>\n";

  // Frame.
  out += "<rect x=\"" + coord(x0) + "\" y=\"" + coord(y1) + "\" width=\"" +
         coord(x1 - x0) + "\" height=\"" + coord(y0 - y1) +
         "\" fill=\"none\" stroke=\"#444444\"/>\n";

  // Five ticks per axis, uniform in the (possibly log) plotting coordinate.
  for (int i = 0; i < 5; ++i) {
    const double t = i / 4.0;
    const double xv = ax.log ? std::exp(std::log(ax.lo) + t * (std::log(ax.hi) - std::log(ax.lo)))
                             : ax.lo + t * (ax.hi - ax.lo);
    const double yv = ay.log ? std::exp(std::log(ay.lo) + t * (std::log(ay.hi) - std::log(ay.lo)))
                             : ay.lo + t * (ay.hi - ay.lo);
    const double px = ax.place(xv, x0, x1);
    const double py = ay.place(yv, y0, y1);
    out += "<line x1=\"" + coord(px) + "\" y1=\"" + coord(y0) + "\" x2=\"" + coord(px) +
           "\" y2=\"" + coord(y0 + 5) + "\" stroke=\"#444444\"/>\n";
    out += "<text x=\"" + coord(px) + "\" y=\"" + coord(y0 + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           label_number(xv) + "</text>\n";
    out += "<line x1=\"" + coord(x0 - 5) + "\" y1=\"" + coord(py) + "\" x2=\"" + coord(x0) +
           "\" y2=\"" + coord(py) + "\" stroke=\"#444444\"/>\n";
    out += "<text x=\"" + coord(x0 - 8) + "\" y=\"" + coord(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           label_number(yv) + "</text>\n";
  }

  out += "<text x=\"" + coord((x0 + x1) / 2.0) + "\" y=\"" + coord(kHeight - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         spec.x_label + "</text>\n";
  out += "<text x=\"16\" y=\"" + coord((y0 + y1) / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " +
         coord((y0 + y1) / 2.0) + ")\">" + spec.y_label + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    if (series[s].xs.size() != series[s].ys.size()) {
      throw ConfigError("plot: series xs/ys lengths differ");
    }
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    for (std::size_t i = 0; i < series[s].xs.size(); ++i) {
      const double px = ax.place(series[s].xs[i], x0, x1);
      const double py = ay.place(series[s].ys[i], y0, y1);
      if (!points.empty()) {
        points += ' ';
      }
      points += coord(px) + "," + coord(py);
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    for (std::size_t i = 0; i < series[s].xs.size(); ++i) {
      const double px = ax.place(series[s].xs[i], x0, x1);
      const double py = ay.place(series[s].ys[i], y0, y1);
      out += "<circle cx=\"" + coord(px) + "\" cy=\"" + coord(py) + "\" r=\"3\" fill=\"" +
             std::string(color) + "\"/>\n";
    }
    if (!series[s].label.empty()) {
      const double ly = kTop + 16.0 + 16.0 * static_cast<double>(s);
      out += "<rect x=\"" + coord(x1 - 150) + "\" y=\"" + coord(ly - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n";
      out += "<text x=\"" + coord(x1 - 136) + "\" y=\"" + coord(ly) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + series[s].label +
             "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace exitlab
