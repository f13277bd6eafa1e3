#pragma once

// Minimal deterministic SVG renderers: a scatter with an optional frontier
// polyline (outlier maps) and a grayscale matrix view (heatmaps). Pure string
// builders with fixed formatting, so identical inputs give identical bytes.

#include <cstddef>
#include <string>
#include <vector>

#include "dirout/functional.hpp"

namespace dirout {

struct SvgScatterSpec {
    std::string x_label = "level";
    std::string y_label = "variability";
    double width = 640.0;
    double height = 480.0;
};

// Points colored by flag (flagged points stand out), frontier drawn as a
// polyline when present. Axes cover the data with a small margin.
std::string svg_scatter(const OutlierMapData& map, const SvgScatterSpec& spec = {});

struct SvgHeatmapSpec {
    double cell = 6.0; // pixels per matrix cell
};

// Row-major matrix rendered as grayscale cells; values are linearly mapped
// from [lo, hi] to black..white and clamped.
std::string svg_heatmap(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                        double lo, double hi, const SvgHeatmapSpec& spec = {});

} // namespace dirout
