#pragma once

#include <string>
#include <vector>

#include "lrlab/table.hpp"

namespace lrlab {

struct PlotSpec {
  std::string title;
  std::string x_param;              ///< parameter column on the x axis
  std::string series_param;         ///< optional: one line per value of this column
  std::vector<std::string> quantities;  ///< rows to plot; one line per quantity if no series_param
  bool log_y = false;
  std::string x_label;
  std::string y_label;
  int max_series = 8;  ///< evenly thinned when there are more
};

/// Line plot of table rows as an SVG document. Non-finite values, and
/// non-positive values on a log axis, are skipped.
std::string render_svg(const ResultTable& table, const PlotSpec& spec);

}  // namespace lrlab
