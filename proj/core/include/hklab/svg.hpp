#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hklab {

struct LogLogPlotOptions {
    std::string title;
    std::string x_label = "t";
    std::string y_label = "p";
    bool has_fit = false;
    double fit_slope = 0.0;       // of -log y vs log x (decay exponent)
    double fit_intercept = 0.0;
    bool has_reference = false;
    double reference_slope = 0.0;  // guide line with this decay exponent
    std::string reference_label;
};

// Self-contained SVG log-log scatter plot with optional fitted line and
// reference-slope guide. Points with non-positive coordinates are skipped.
std::string render_loglog_svg(const std::vector<std::pair<double, double>>& points,
                              const LogLogPlotOptions& opt);

}  // namespace hklab
