#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pm25kit/errors.hpp"

namespace pm25 {

enum class ChartKind { Line, Bar, Scatter, Heatmap, Elbow };

/// One observation; an absent y is a gap and renders as a break, never a zero.
struct ChartPoint {
    double x = 0.0;
    std::optional<double> y;
};

struct ChartSeries {
    std::string label;
    std::vector<ChartPoint> points;
};

struct HeatmapData {
    std::vector<std::string> labels;         // shared row/column labels
    std::vector<std::vector<double>> values; // labels.size() x labels.size()
};

struct ChartSpec {
    ChartKind kind = ChartKind::Line;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;   // line/bar/scatter/elbow
    std::optional<HeatmapData> heatmap;
    std::optional<double> knee_x;      // elbow marker
};

/// Renders a deterministic standalone SVG document on a fixed 960x540 canvas:
/// no timestamps, no randomness, byte-identical for identical specs.
std::string render_chart(const ChartSpec& spec);

} // namespace pm25
