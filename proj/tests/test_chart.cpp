#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "pm25kit/chart.hpp"

using namespace pm25;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

ChartSpec simple_line() {
    ChartSpec spec;
    spec.kind = ChartKind::Line;
    spec.title = "PM2.5 Trend";
    spec.x_label = "Year";
    spec.y_label = "PM2.5";
    ChartSeries s;
    s.label = "Bangladesh";
    s.points = {{2018, 79.9}, {2023, 97.1}};
    spec.series.push_back(s);
    return spec;
}

} // namespace

TEST_CASE("a two-point series renders exactly one polyline") {
    const std::string svg = render_chart(simple_line());
    CHECK(count_occurrences(svg, "<polyline") == 1);

    const auto pos = svg.find("points=\"");
    REQUIRE(pos != std::string::npos);
    const auto end = svg.find('"', pos + 8);
    const std::string points = svg.substr(pos + 8, end - pos - 8);
    CHECK(count_occurrences(points, ",") == 2); // two x,y pairs
}

TEST_CASE("rendering is byte-deterministic") {
    const auto spec = simple_line();
    CHECK(render_chart(spec) == render_chart(spec));
}

TEST_CASE("gaps split a series into separate polylines") {
    ChartSpec spec;
    spec.kind = ChartKind::Line;
    spec.title = "gappy";
    ChartSeries s;
    s.label = "country";
    s.points = {{2018, 10.0}, {2019, 12.0}, {2020, std::nullopt}, {2021, 9.0}, {2022, 11.0}};
    spec.series.push_back(s);
    const std::string svg = render_chart(spec);
    CHECK(count_occurrences(svg, "<polyline") == 2);
    // The gap never renders as a fabricated zero-height point.
    CHECK(count_occurrences(svg, "<circle") == 4);
}

TEST_CASE("heatmap renders one cell per matrix entry with shared diagonal color") {
    ChartSpec spec;
    spec.kind = ChartKind::Heatmap;
    spec.title = "correlation";
    spec.heatmap = HeatmapData{{"PM2.5", "Density"}, {{1.0, -0.20}, {-0.20, 1.0}}};
    const std::string svg = render_chart(spec);

    // Four data cells plus the canvas background rect.
    CHECK(count_occurrences(svg, "<rect") == 5);

    // Both diagonal entries carry the same fill; both off-diagonal entries too.
    const std::size_t first = svg.find("fill=\"#", svg.find("<rect", svg.find("<rect") + 1));
    REQUIRE(first != std::string::npos);
    std::vector<std::string> fills;
    for (std::size_t pos = svg.find("<rect", 1); pos != std::string::npos;
         pos = svg.find("<rect", pos + 1)) {
        const auto f = svg.find("fill=\"", pos);
        fills.push_back(svg.substr(f + 6, 7));
    }
    REQUIRE(fills.size() == 5);
    CHECK(fills[1] == fills[4]); // (0,0) and (1,1)
    CHECK(fills[2] == fills[3]); // (0,1) and (1,0)
    CHECK(fills[1] != fills[2]);
}

TEST_CASE("scatter renders one circle per present point") {
    ChartSpec spec;
    spec.kind = ChartKind::Scatter;
    spec.title = "clusters";
    ChartSeries a{"Low", {{1, 10.0}, {2, 12.0}}};
    ChartSeries b{"High", {{3, 90.0}, {4, std::nullopt}}};
    spec.series = {a, b};
    const std::string svg = render_chart(spec);
    CHECK(count_occurrences(svg, "<circle") == 3);
}

TEST_CASE("bar chart skips gaps instead of plotting zeros") {
    ChartSpec spec;
    spec.kind = ChartKind::Bar;
    spec.title = "deaths";
    ChartSeries a{"South Asia", {{2018, 5.0}, {2019, 6.0}}};
    ChartSeries b{"East Asia", {{2018, 2.0}, {2019, std::nullopt}}};
    spec.series = {a, b};
    const std::string svg = render_chart(spec);
    // Background rect + legend swatches (2) + three bars.
    CHECK(count_occurrences(svg, "<rect") == 6);
}

TEST_CASE("elbow chart marks the knee") {
    ChartSpec spec;
    spec.kind = ChartKind::Elbow;
    spec.title = "Elbow Method for Optimal k";
    ChartSeries s{"WCSS", {{1, 100.0}, {2, 40.0}, {3, 10.0}, {4, 8.0}}};
    spec.series = {s};
    spec.knee_x = 3.0;
    const std::string svg = render_chart(spec);
    CHECK(svg.find("knee k=3") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("chart validation errors") {
    ChartSpec empty;
    empty.kind = ChartKind::Line;
    CHECK_THROWS_AS(render_chart(empty), ArgumentError);

    ChartSpec bad;
    bad.kind = ChartKind::Line;
    ChartSeries s{"x", {{1.0, std::numeric_limits<double>::quiet_NaN()}}};
    bad.series = {s};
    CHECK_THROWS_AS(render_chart(bad), ArgumentError);

    ChartSpec heat;
    heat.kind = ChartKind::Heatmap;
    CHECK_THROWS_AS(render_chart(heat), ArgumentError);

    ChartSpec ragged;
    ragged.kind = ChartKind::Heatmap;
    ragged.heatmap = HeatmapData{{"a", "b"}, {{1.0, 2.0}}};
    CHECK_THROWS_AS(render_chart(ragged), ArgumentError);
}
