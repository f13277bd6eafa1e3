#include "dirout/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dirout/errors.hpp"

namespace dirout {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Finite data range with a proportional margin; degenerate ranges widen to a
// unit box so single points still render.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;

    static Axis of(const std::vector<double>& a, const std::vector<double>& b) {
        double lo = 1e300, hi = -1e300;
        for (const std::vector<double>* v : {&a, &b}) {
            for (double x : *v) {
                if (!std::isfinite(x)) continue;
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
        if (lo > hi) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double margin = 0.05 * (hi - lo);
        return {lo - margin, hi + margin};
    }

    double frac(double v) const { return (v - lo) / (hi - lo); }
};

} // namespace

std::string svg_scatter(const OutlierMapData& map, const SvgScatterSpec& spec) {
    if (map.level.size() != map.variability.size() || map.level.size() != map.flags.size()) {
        throw ConfigError("scatter arrays disagree in length");
    }
    const Axis x = Axis::of(map.level, map.frontier_level);
    const Axis y = Axis::of(map.variability, map.frontier_variability);
    const double pad = 40.0;
    const double w = spec.width - 2.0 * pad;
    const double h = spec.height - 2.0 * pad;
    auto px = [&](double v) { return pad + w * x.frac(v); };
    auto py = [&](double v) { return pad + h * (1.0 - y.frac(v)); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(spec.width)
        << "\" height=\"" << num(spec.height) << "\" viewBox=\"0 0 " << num(spec.width) << ' '
        << num(spec.height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << num(pad) << "\" y=\"" << num(pad) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(spec.width / 2.0) << "\" y=\"" << num(spec.height - 8.0)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << spec.x_label << "</text>\n";
    out << "<text x=\"14\" y=\"" << num(spec.height / 2.0)
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 14 "
        << num(spec.height / 2.0) << ")\">" << spec.y_label << "</text>\n";

    if (!map.frontier_level.empty()) {
        if (map.frontier_level.size() != map.frontier_variability.size()) {
            throw ConfigError("frontier arrays disagree in length");
        }
        out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < map.frontier_level.size(); ++i) {
            if (i != 0) out << ' ';
            out << num(px(map.frontier_level[i])) << ',' << num(py(map.frontier_variability[i]));
        }
        out << "\"/>\n";
    }

    for (std::size_t i = 0; i < map.level.size(); ++i) {
        if (!std::isfinite(map.level[i]) || !std::isfinite(map.variability[i])) continue;
        const char* fill = map.flags[i] ? "#d62728" : "#555555";
        out << "<circle cx=\"" << num(px(map.level[i])) << "\" cy=\"" << num(py(map.variability[i]))
            << "\" r=\"3\" fill=\"" << fill << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_heatmap(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                        double lo, double hi, const SvgHeatmapSpec& spec) {
    if (values.size() != rows * cols) {
        throw ConfigError("heatmap payload size " + std::to_string(values.size()) +
                          " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!(hi > lo)) throw ConfigError("heatmap range must satisfy lo < hi");

    std::ostringstream out;
    const double w = static_cast<double>(cols) * spec.cell;
    const double h = static_cast<double>(rows) * spec.cell;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
        << num(h) << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h)
        << "\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            double v = values[r * cols + c];
            double f = std::isfinite(v) ? (v - lo) / (hi - lo) : 1.0;
            f = std::clamp(f, 0.0, 1.0);
            const int level = static_cast<int>(std::lround(f * 255.0));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", level, level, level);
            out << "<rect x=\"" << num(static_cast<double>(c) * spec.cell) << "\" y=\""
                << num(static_cast<double>(r) * spec.cell) << "\" width=\"" << num(spec.cell)
                << "\" height=\"" << num(spec.cell) << "\" fill=\"" << color << "\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace dirout
