#pragma once

// Standalone SVG figures. Every figure is a view of data that is also written as CSV.

#include <string>
#include <vector>

#include "kerrsteer/pipeline.hpp"

namespace kerrsteer {

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with a dashed reference at y = 1 when `unit_reference` is set.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<LineSeries>& series, bool unit_reference = true);

/// Heatmap of a sweep. Cells that are not ok are drawn hatched grey. Classification
/// sweeps use a categorical palette, the others a continuous one with a colour bar.
std::string heatmap_svg(const SweepGrid& grid, const std::string& title);

/// The criteria of a point analysis against omega.
std::string spectrum_svg(const std::vector<SpectrumRow>& rows);

}  // namespace kerrsteer
