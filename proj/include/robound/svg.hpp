#pragma once

#include <string>
#include <vector>

namespace robound::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<Series> series;
};

/// Self-contained SVG line chart with axes, ticks and a legend. Output is a
/// pure function of the plot contents.
std::string render(const Plot& plot, int width = 640, int height = 420);

}  // namespace robound::svg
