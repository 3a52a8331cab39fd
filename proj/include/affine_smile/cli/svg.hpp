#pragma once

#include <limits>
#include <string>
#include <vector>

namespace affine_smile::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    /// Optional clip on y; NaN keeps the data range.
    double y_min = std::numeric_limits<double>::quiet_NaN();
    double y_max = std::numeric_limits<double>::quiet_NaN();
};

/// Line plot with axes, ticks and legend. Non-finite points break the polyline.
std::string render_svg(const Plot& plot);

}  // namespace affine_smile::cli
