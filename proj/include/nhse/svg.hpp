#pragma once

#include "nhse/ensemble.hpp"

#include <string>
#include <vector>

namespace nhse {

struct LineSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Polyline chart; with log_y the y axis shows log10(y) and points with
/// y <= 0 are dropped.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<LineSeries>& series,
                           bool log_y = false);

/// One coloured rect per sweep cell (axis1 horizontal, axis2 vertical),
/// colour scale on [0, 1], invalid cells grey.
std::string heatmap_svg(const SweepResult& sweep, const std::string& title);

/// |v_j| against site j on a log scale, one line per vector.
std::string semilog_overlay_svg(const std::string& title,
                                const std::vector<std::vector<double>>& vectors);

} // namespace nhse
