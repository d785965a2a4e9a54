#pragma once

#include <string>
#include <vector>

namespace syncnet {

struct SvgSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> y;
};

/// Log-y line plot in a 960x540 viewBox. One polyline per series and a dashed vertical marker at
/// each switch time. Non-positive values are clamped to the smallest positive value plotted.
std::string render_svg(const std::vector<SvgSeries>& series, const std::vector<double>& switch_times,
                       const std::string& title);

}  // namespace syncnet
