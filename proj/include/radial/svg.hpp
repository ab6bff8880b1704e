#pragma once

#include <functional>
#include <string>
#include <vector>

#include "radial/common.hpp"

namespace radial {

struct LineSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG scatter plot of a 2D sample set. `comment_lines`
/// (typically the resolved spec) are embedded as an XML comment.
void write_scatter_svg(const std::string& path, const SampleSet& z,
                       const std::string& title,
                       const std::vector<std::string>& comment_lines = {});

/// Histogram of `values` (equal-width bins, density-normalized) with an
/// optional analytic density polyline overlaid.
void write_histogram_svg(const std::string& path,
                         const std::vector<double>& values, std::size_t bins,
                         const std::function<double(double)>& density,
                         const std::string& title, const std::string& x_label,
                         const std::vector<std::string>& comment_lines = {});

/// Multi-series line chart with a legend.
void write_lines_svg(const std::string& path,
                     const std::vector<LineSeries>& series,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label,
                     const std::vector<std::string>& comment_lines = {});

/// Histogram bin dump companion to write_histogram_svg: edges and counts.
void write_histogram_csv(const std::string& path,
                         const std::vector<double>& values, std::size_t bins,
                         const std::vector<std::string>& comment_lines);

}  // namespace radial
