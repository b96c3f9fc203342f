#include "pm25kit/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pm25 {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kPlotLeft = 70.0;
constexpr double kPlotTop = 50.0;
constexpr double kPlotBottom = 485.0;

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

const char* series_color(std::size_t index) { return kPalette[index % kPaletteSize]; }

std::string esc(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double nice_step(double raw) {
    if (raw <= 0.0) return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step;
    if (norm <= 1.0) step = 1.0;
    else if (norm <= 2.0) step = 2.0;
    else if (norm <= 5.0) step = 5.0;
    else step = 10.0;
    return step * mag;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    double span() const { return hi - lo; }
};

struct Frame {
    Range x, y;
    double plot_right;

    double px(double x_val) const {
        return kPlotLeft + (x_val - x.lo) / x.span() * (plot_right - kPlotLeft);
    }
    double py(double y_val) const {
        return kPlotBottom - (y_val - y.lo) / y.span() * (kPlotBottom - kPlotTop);
    }
};

void heading(std::ostringstream& svg, const ChartSpec& spec) {
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"540\" "
           "viewBox=\"0 0 960 540\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
    svg << "<text x=\"480\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" "
           "text-anchor=\"middle\" fill=\"#111111\">"
        << esc(spec.title) << "</text>\n";
}

void axis_labels(std::ostringstream& svg, const ChartSpec& spec, double plot_right) {
    const double mid_x = (kPlotLeft + plot_right) / 2.0;
    if (!spec.x_label.empty()) {
        svg << "<text x=\"" << coord(mid_x) << "\" y=\"525\" font-family=\"sans-serif\" "
               "font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\">"
            << esc(spec.x_label) << "</text>\n";
    }
    if (!spec.y_label.empty()) {
        const double mid_y = (kPlotTop + kPlotBottom) / 2.0;
        svg << "<text x=\"18\" y=\"" << coord(mid_y) << "\" font-family=\"sans-serif\" "
               "font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\" transform=\"rotate(-90 18 "
            << coord(mid_y) << ")\">" << esc(spec.y_label) << "</text>\n";
    }
}

void frame_and_ticks(std::ostringstream& svg, const Frame& f, bool integer_x) {
    // y grid + ticks
    const double y_step = nice_step(f.y.span() / 5.0);
    for (double v = std::ceil(f.y.lo / y_step) * y_step; v <= f.y.hi + 1e-9; v += y_step) {
        const double y = f.py(v);
        svg << "<line x1=\"" << coord(kPlotLeft) << "\" y1=\"" << coord(y) << "\" x2=\""
            << coord(f.plot_right) << "\" y2=\"" << coord(y)
            << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << coord(kPlotLeft - 8) << "\" y=\"" << coord(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
               "fill=\"#555555\">" << tick_label(v) << "</text>\n";
    }
    // x ticks
    double x_step = nice_step(f.x.span() / 8.0);
    if (integer_x) x_step = std::max(1.0, std::round(x_step));
    for (double v = std::ceil(f.x.lo / x_step) * x_step; v <= f.x.hi + 1e-9; v += x_step) {
        const double x = f.px(v);
        svg << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(kPlotBottom) << "\" x2=\""
            << coord(x) << "\" y2=\"" << coord(kPlotBottom + 5)
            << "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << coord(x) << "\" y=\"" << coord(kPlotBottom + 20)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
               "fill=\"#555555\">" << tick_label(v) << "</text>\n";
    }
    // axes
    svg << "<line x1=\"" << coord(kPlotLeft) << "\" y1=\"" << coord(kPlotTop) << "\" x2=\""
        << coord(kPlotLeft) << "\" y2=\"" << coord(kPlotBottom)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << coord(kPlotLeft) << "\" y1=\"" << coord(kPlotBottom) << "\" x2=\""
        << coord(f.plot_right) << "\" y2=\"" << coord(kPlotBottom)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
}

void legend(std::ostringstream& svg, const ChartSpec& spec, double plot_right) {
    if (spec.series.size() < 2) return;
    double y = kPlotTop + 10.0;
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        svg << "<rect x=\"" << coord(plot_right + 12) << "\" y=\"" << coord(y - 9)
            << "\" width=\"12\" height=\"12\" fill=\"" << series_color(i) << "\"/>\n";
        svg << "<text x=\"" << coord(plot_right + 30) << "\" y=\"" << coord(y + 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">"
            << esc(spec.series[i].label) << "</text>\n";
        y += 20.0;
    }
}

void validate_points(const ChartSpec& spec) {
    for (const auto& s : spec.series) {
        for (const auto& p : s.points) {
            if (!std::isfinite(p.x) || (p.y && !std::isfinite(*p.y))) {
                throw ArgumentError("render_chart: series '" + s.label +
                                    "' contains a non-finite coordinate");
            }
        }
    }
}

Frame data_frame(const ChartSpec& spec, double plot_right, bool y_from_zero) {
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool first = true;
    for (const auto& s : spec.series) {
        for (const auto& p : s.points) {
            if (!p.y) continue;
            if (first) {
                x_lo = x_hi = p.x;
                y_lo = y_hi = *p.y;
                first = false;
            } else {
                x_lo = std::min(x_lo, p.x);
                x_hi = std::max(x_hi, p.x);
                y_lo = std::min(y_lo, *p.y);
                y_hi = std::max(y_hi, *p.y);
            }
        }
    }
    if (x_hi == x_lo) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (y_from_zero) y_lo = std::min(0.0, y_lo);
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    const double pad = (y_hi - y_lo) * 0.05;
    return Frame{{x_lo, x_hi}, {y_lo, y_hi + pad}, plot_right};
}

bool all_integer_x(const ChartSpec& spec) {
    for (const auto& s : spec.series) {
        for (const auto& p : s.points) {
            if (p.x != std::floor(p.x)) return false;
        }
    }
    return true;
}

void render_line_series(std::ostringstream& svg, const ChartSpec& spec, const Frame& f) {
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const auto& s = spec.series[i];
        // Gaps break the line: emit one polyline per run of present points.
        std::vector<std::vector<const ChartPoint*>> runs(1);
        for (const auto& p : s.points) {
            if (p.y) {
                runs.back().push_back(&p);
            } else if (!runs.back().empty()) {
                runs.emplace_back();
            }
        }
        for (const auto& run : runs) {
            if (run.size() < 2) continue;
            svg << "<polyline fill=\"none\" stroke=\"" << series_color(i)
                << "\" stroke-width=\"2\" points=\"";
            for (std::size_t j = 0; j < run.size(); ++j) {
                if (j) svg << ' ';
                svg << coord(f.px(run[j]->x)) << ',' << coord(f.py(*run[j]->y));
            }
            svg << "\"/>\n";
        }
        for (const auto& p : s.points) {
            if (!p.y) continue;
            svg << "<circle cx=\"" << coord(f.px(p.x)) << "\" cy=\"" << coord(f.py(*p.y))
                << "\" r=\"3\" fill=\"" << series_color(i) << "\"/>\n";
        }
    }
}

std::string render_line_like(const ChartSpec& spec, bool elbow) {
    validate_points(spec);
    const double plot_right = spec.series.size() >= 2 ? 760.0 : 920.0;
    const Frame f = data_frame(spec, plot_right, /*y_from_zero=*/true);

    std::ostringstream svg;
    heading(svg, spec);
    frame_and_ticks(svg, f, all_integer_x(spec));
    if (elbow && spec.knee_x) {
        const double x = f.px(*spec.knee_x);
        svg << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(kPlotTop) << "\" x2=\""
            << coord(x) << "\" y2=\"" << coord(kPlotBottom)
            << "\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << coord(x + 6) << "\" y=\"" << coord(kPlotTop + 16)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">knee k="
            << tick_label(*spec.knee_x) << "</text>\n";
    }
    render_line_series(svg, spec, f);
    legend(svg, spec, plot_right);
    axis_labels(svg, spec, plot_right);
    svg << "</svg>\n";
    return svg.str();
}

std::string render_bar(const ChartSpec& spec) {
    validate_points(spec);
    const double plot_right = spec.series.size() >= 2 ? 760.0 : 920.0;

    std::vector<double> categories;
    for (const auto& s : spec.series) {
        for (const auto& p : s.points) categories.push_back(p.x);
    }
    std::sort(categories.begin(), categories.end());
    categories.erase(std::unique(categories.begin(), categories.end()), categories.end());

    double y_hi = 0.0;
    for (const auto& s : spec.series) {
        for (const auto& p : s.points) {
            if (p.y) y_hi = std::max(y_hi, *p.y);
        }
    }
    if (y_hi == 0.0) y_hi = 1.0;
    Frame f{{0.0, static_cast<double>(categories.size())}, {0.0, y_hi * 1.05}, plot_right};

    std::ostringstream svg;
    heading(svg, spec);
    // y grid only; x carries category labels.
    const double y_step = nice_step(f.y.span() / 5.0);
    for (double v = 0.0; v <= f.y.hi + 1e-9; v += y_step) {
        const double y = f.py(v);
        svg << "<line x1=\"" << coord(kPlotLeft) << "\" y1=\"" << coord(y) << "\" x2=\""
            << coord(plot_right) << "\" y2=\"" << coord(y)
            << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << coord(kPlotLeft - 8) << "\" y=\"" << coord(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
               "fill=\"#555555\">" << tick_label(v) << "</text>\n";
    }

    const double group_w = (plot_right - kPlotLeft) / categories.size();
    const double bar_w = group_w * 0.8 / std::max<std::size_t>(1, spec.series.size());
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        for (const auto& p : spec.series[i].points) {
            if (!p.y) continue; // gap: no bar, never a zero-height fabrication
            const auto cat = std::lower_bound(categories.begin(), categories.end(), p.x);
            const std::size_t ci = static_cast<std::size_t>(cat - categories.begin());
            const double x0 = kPlotLeft + ci * group_w + group_w * 0.1 + i * bar_w;
            const double y0 = f.py(*p.y);
            svg << "<rect x=\"" << coord(x0) << "\" y=\"" << coord(y0) << "\" width=\""
                << coord(bar_w) << "\" height=\"" << coord(kPlotBottom - y0) << "\" fill=\""
                << series_color(i) << "\"/>\n";
        }
    }
    for (std::size_t ci = 0; ci < categories.size(); ++ci) {
        const double cx = kPlotLeft + (ci + 0.5) * group_w;
        svg << "<text x=\"" << coord(cx) << "\" y=\"" << coord(kPlotBottom + 20)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
               "fill=\"#555555\">" << tick_label(categories[ci]) << "</text>\n";
    }
    svg << "<line x1=\"" << coord(kPlotLeft) << "\" y1=\"" << coord(kPlotBottom) << "\" x2=\""
        << coord(plot_right) << "\" y2=\"" << coord(kPlotBottom)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    legend(svg, spec, plot_right);
    axis_labels(svg, spec, plot_right);
    svg << "</svg>\n";
    return svg.str();
}

std::string render_scatter(const ChartSpec& spec) {
    validate_points(spec);
    const double plot_right = spec.series.size() >= 2 ? 760.0 : 920.0;
    const Frame f = data_frame(spec, plot_right, /*y_from_zero=*/true);

    std::ostringstream svg;
    heading(svg, spec);
    frame_and_ticks(svg, f, all_integer_x(spec));
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        for (const auto& p : spec.series[i].points) {
            if (!p.y) continue;
            svg << "<circle cx=\"" << coord(f.px(p.x)) << "\" cy=\"" << coord(f.py(*p.y))
                << "\" r=\"4.5\" fill=\"" << series_color(i) << "\" fill-opacity=\"0.85\"/>\n";
        }
    }
    legend(svg, spec, plot_right);
    axis_labels(svg, spec, plot_right);
    svg << "</svg>\n";
    return svg.str();
}

// Diverging blue-white-red map over [-1, 1].
std::string heat_color(double v) {
    v = std::clamp(v, -1.0, 1.0);
    int r, g, b;
    if (v < 0.0) {
        const double t = v + 1.0; // 0 at -1 -> deep blue, 1 at 0 -> white
        r = static_cast<int>(std::lround(33 + (255 - 33) * t));
        g = static_cast<int>(std::lround(102 + (255 - 102) * t));
        b = static_cast<int>(std::lround(172 + (255 - 172) * t));
    } else {
        const double t = v; // 0 -> white, 1 -> deep red
        r = static_cast<int>(std::lround(255 - (255 - 178) * t));
        g = static_cast<int>(std::lround(255 - (255 - 24) * t));
        b = static_cast<int>(std::lround(255 - (255 - 43) * t));
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string render_heatmap(const ChartSpec& spec) {
    const auto& hm = *spec.heatmap;
    const std::size_t n = hm.labels.size();
    if (n == 0) throw ArgumentError("render_chart: heatmap has no labels");
    if (hm.values.size() != n) {
        throw ArgumentError("render_chart: heatmap matrix must be square");
    }
    for (const auto& row : hm.values) {
        if (row.size() != n) throw ArgumentError("render_chart: heatmap matrix must be square");
        for (double v : row) {
            if (!std::isfinite(v)) throw ArgumentError("render_chart: non-finite heatmap value");
        }
    }

    const double area = std::min(kPlotBottom - kPlotTop, 920.0 - 220.0);
    const double cell = area / static_cast<double>(n);
    const double left = 240.0;
    const double top = kPlotTop + 10.0;

    std::ostringstream svg;
    heading(svg, spec);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = hm.values[i][j];
            const double x = left + j * cell;
            const double y = top + i * cell;
            svg << "<rect x=\"" << coord(x) << "\" y=\"" << coord(y) << "\" width=\""
                << coord(cell) << "\" height=\"" << coord(cell) << "\" fill=\"" << heat_color(v)
                << "\" stroke=\"#ffffff\" stroke-width=\"2\"/>\n";
            char value_text[32];
            std::snprintf(value_text, sizeof(value_text), "%.2f", v);
            svg << "<text x=\"" << coord(x + cell / 2) << "\" y=\"" << coord(y + cell / 2 + 5)
                << "\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\" "
                   "fill=\"#111111\">" << value_text << "</text>\n";
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        svg << "<text x=\"" << coord(left - 10) << "\" y=\"" << coord(top + i * cell + cell / 2 + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" "
               "fill=\"#333333\">" << esc(hm.labels[i]) << "</text>\n";
        svg << "<text x=\"" << coord(left + i * cell + cell / 2) << "\" y=\"" << coord(top - 8)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
               "fill=\"#333333\">" << esc(hm.labels[i]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

std::string render_chart(const ChartSpec& spec) {
    if (spec.kind == ChartKind::Heatmap) {
        if (!spec.heatmap) throw ArgumentError("render_chart: heatmap spec without matrix");
        return render_heatmap(spec);
    }
    if (spec.series.empty()) throw ArgumentError("render_chart: no series to draw");
    switch (spec.kind) {
        case ChartKind::Line: return render_line_like(spec, /*elbow=*/false);
        case ChartKind::Elbow: return render_line_like(spec, /*elbow=*/true);
        case ChartKind::Bar: return render_bar(spec);
        case ChartKind::Scatter: return render_scatter(spec);
        case ChartKind::Heatmap: break;
    }
    throw ArgumentError("render_chart: unknown chart kind");
}

} // namespace pm25
