#pragma once

#include <string>
#include <vector>

namespace hts::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    bool dashed = false;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Standalone SVG document. Output depends only on the chart contents.
std::string render(const LineChart& chart);

/// Color for the i-th series from a fixed palette.
const char* palette(std::size_t i);

}  // namespace hts::svg
