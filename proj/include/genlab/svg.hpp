#pragma once

#include <string>
#include <vector>

namespace genlab {

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> y;
};

/**
 * Self-contained SVG line chart (inline styles, fixed 800x500 viewBox, 5 axis
 * ticks per axis). One polyline per series; x positions are log10(x) when all
 * x values are positive, else the raw values.
 */
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<double>& x, const std::vector<SvgSeries>& series);

}  // namespace genlab
