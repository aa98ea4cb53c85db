#pragma once

#include <string>
#include <vector>

namespace mblborn {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

/// Minimal line chart (axes, ticks, legend); y values may be log-scaled.
void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_y = false);

/// Histogram over uniform bins of [lo, hi].
void write_histogram_svg(const std::string& path, const std::string& title,
                         const std::string& x_label, double lo, double hi,
                         const std::vector<std::vector<double>>& bin_counts,
                         const std::vector<std::string>& labels);

}  // namespace mblborn
