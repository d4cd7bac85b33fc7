// SPDX-License-Identifier: Apache-2.0
// Minimal deterministic SVG line plots (markers, polyline, ticks, optional
// log axes). Just enough to eyeball a sweep; the CSVs are the record.
#pragma once

#include <string>
#include <vector>

namespace exitlab {

struct PlotSeries {
  std::vector<double> xs;
  std::vector<double> ys;
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

//! Render one or more series as a 640x440 line plot. Log axes require
//! strictly positive data on that axis.
std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace exitlab
