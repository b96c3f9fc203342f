#include "pm25kit/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "pm25kit/analysis.hpp"
#include "pm25kit/chart.hpp"
#include "pm25kit/report.hpp"
#include "pm25kit/version.hpp"

namespace fs = std::filesystem;

namespace pm25 {

namespace {

struct CommonOptions {
    std::string input;
    bool embedded = false;
    std::string out = "out";
    std::string fill = "exclude";
    std::uint64_t seed = 0;
    std::string format = "both";
};

void add_common_options(CLI::App* sub, CommonOptions& opts) {
    sub->add_option("--input", opts.input, "Input CSV path");
    sub->add_flag("--embedded", opts.embedded, "Use the built-in desk-scale dataset");
    sub->add_option("--out", opts.out, "Output directory (created if missing)");
    sub->add_option("--fill-policy", opts.fill, "Missing PM2.5 handling: zero|exclude")
        ->check(CLI::IsMember({"zero", "exclude"}));
    sub->add_option("--seed", opts.seed, "Random seed for clustering restarts");
    sub->add_option("--format", opts.format, "Table output format: csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

Dataset load_from_options(const CommonOptions& opts) {
    if (opts.embedded == !opts.input.empty()) {
        throw ArgumentError("provide exactly one of --input PATH or --embedded");
    }
    const FillPolicy policy =
        opts.fill == "zero" ? FillPolicy::ZeroFill : FillPolicy::Exclude;
    if (opts.embedded) {
        Dataset ds = embedded_dataset();
        if (policy == FillPolicy::ZeroFill) ds = with_fill_policy(ds, policy);
        return ds;
    }
    return load_dataset_file(opts.input, policy);
}

class OutputWriter {
public:
    OutputWriter(const CommonOptions& opts) : dir_(opts.out), format_(opts.format) {
        fs::create_directories(dir_);
    }

    bool csv_enabled() const { return format_ != "json"; }
    bool json_enabled() const { return format_ != "csv"; }

    void write_text(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw ArgumentError("cannot write output file: " + (dir_ / name).string());
        out << content;
        written_.push_back(name);
    }

    void write_tables(const StudyReport& report) {
        if (!csv_enabled()) return;
        for (const auto& table : report.tables) {
            // The cluster assignment table is the headline output and keeps its
            // short name; everything else is prefixed by the study id.
            const std::string name = table.name == "clusters"
                ? "clusters.csv" : report.study + "_" + table.name + ".csv";
            write_text(name, table_to_csv(table));
        }
    }

    void write_chart(const std::string& name, const ChartSpec& spec) {
        write_text(name, render_chart(spec));
    }

    std::vector<std::string> sorted_outputs() const {
        auto out = written_;
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    fs::path dir_;
    std::string format_;
    std::vector<std::string> written_;
};

std::string region_slug(Region region) {
    std::string slug;
    for (char c : region_name(region)) {
        slug += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return slug;
}

// ---- chart builders ---------------------------------------------------------

ChartSpec trend_chart_for_region(const Dataset& ds, Region region) {
    ChartSpec spec;
    spec.kind = ChartKind::Line;
    spec.title = "PM2.5 Trends - " + std::string(region_name(region)) + " (2018-2023)";
    spec.x_label = "Year";
    spec.y_label = "PM2.5 (µg/m³)";
    std::vector<const CountryRecord*> recs;
    for (const auto& rec : ds.records) {
        if (rec.region == region && !rec.pm25.empty()) recs.push_back(&rec);
    }
    std::sort(recs.begin(), recs.end(), [](const CountryRecord* a, const CountryRecord* b) {
        return a->country < b->country;
    });
    for (const auto* rec : recs) {
        ChartSeries series;
        series.label = rec->country;
        for (int year = 2018; year <= 2023; ++year) {
            ChartPoint p;
            p.x = year;
            p.y = rec->pm25.get(year);
            series.points.push_back(p);
        }
        spec.series.push_back(std::move(series));
    }
    return spec;
}

ChartSpec trend_chart_overall(const TrendStudy& study) {
    ChartSpec spec;
    spec.kind = ChartKind::Line;
    spec.title = "Average PM2.5 by Region (2018-2023)";
    spec.x_label = "Year";
    spec.y_label = "Average PM2.5 (µg/m³)";
    for (Region region : kAllRegions) {
        ChartSeries series;
        series.label = std::string(region_name(region));
        bool any = false;
        for (int year = 2018; year <= 2023; ++year) {
            ChartPoint p;
            p.x = year;
            if (auto cell = study.table.at(region, year)) {
                p.y = cell->mean;
                any = true;
            }
            series.points.push_back(p);
        }
        if (any) spec.series.push_back(std::move(series));
    }
    return spec;
}

ChartSpec deaths_regional_chart(const DeathStudy& study) {
    ChartSpec spec;
    spec.kind = ChartKind::Bar;
    spec.title = "Average Air-Pollution Death Rate by Region (2018-2021)";
    spec.x_label = "Year";
    spec.y_label = "Average death rate";
    for (Region region : kAllRegions) {
        auto rit = study.regional.find(region);
        if (rit == study.regional.end()) continue;
        ChartSeries series;
        series.label = std::string(region_name(region));
        for (int year = 2018; year <= 2021; ++year) {
            ChartPoint p;
            p.x = year;
            auto yit = rit->second.find(year);
            if (yit != rit->second.end()) p.y = yit->second.mean;
            series.points.push_back(p);
        }
        spec.series.push_back(std::move(series));
    }
    return spec;
}

ChartSpec deaths_south_asia_chart(const DeathStudy& study) {
    ChartSpec spec;
    spec.kind = ChartKind::Line;
    spec.title = "Air-Pollution Death Rates - South Asia (2018-2021)";
    spec.x_label = "Year";
    spec.y_label = "Death rate";
    for (const auto& [country, rates] : study.south_asia) {
        ChartSeries series;
        series.label = country;
        for (int year = 2018; year <= 2021; ++year) {
            ChartPoint p;
            p.x = year;
            auto it = rates.find(year);
            if (it != rates.end()) p.y = it->second;
            series.points.push_back(p);
        }
        spec.series.push_back(std::move(series));
    }
    return spec;
}

ChartSpec correlation_heatmap(const std::string& title, const std::string& label_a,
                              const std::string& label_b, double r) {
    ChartSpec spec;
    spec.kind = ChartKind::Heatmap;
    spec.title = title;
    spec.heatmap = HeatmapData{{label_a, label_b}, {{1.0, r}, {r, 1.0}}};
    return spec;
}

ChartSpec elbow_chart(const ElbowCurve& curve) {
    ChartSpec spec;
    spec.kind = ChartKind::Elbow;
    spec.title = "Elbow Method for Optimal k";
    spec.x_label = "k";
    spec.y_label = "WCSS";
    ChartSeries series;
    series.label = "WCSS";
    for (const auto& [k, wcss] : curve.wcss) {
        series.points.push_back({static_cast<double>(k), wcss});
    }
    spec.series.push_back(std::move(series));
    spec.knee_x = static_cast<double>(curve.knee);
    return spec;
}

ChartSpec cluster_chart(const Dataset& ds, const ClusterModel& model) {
    ChartSpec spec;
    spec.kind = ChartKind::Scatter;
    spec.title = "PM2.5 Levels (2023) by Cluster";
    spec.x_label = "Country rank by PM2.5";
    spec.y_label = "PM2.5 (µg/m³)";

    struct Entry {
        double value;
        int cluster;
    };
    std::vector<Entry> entries;
    for (const auto& [country, cluster] : model.assignments) {
        const CountryRecord* rec = ds.find(country);
        if (!rec) continue;
        if (auto v = rec->pm25.get(2023)) entries.push_back({*v, cluster});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.value < b.value; });

    std::vector<ChartSeries> per_cluster(model.k);
    for (int c = 0; c < model.k; ++c) {
        auto it = model.labels.find(c);
        per_cluster[c].label = it != model.labels.end()
            ? std::string(pollution_level_name(it->second))
            : "Cluster " + std::to_string(c);
    }
    for (std::size_t rank = 0; rank < entries.size(); ++rank) {
        per_cluster[entries[rank].cluster].points.push_back(
            {static_cast<double>(rank + 1), entries[rank].value});
    }
    for (auto& series : per_cluster) {
        if (!series.points.empty()) spec.series.push_back(std::move(series));
    }
    return spec;
}

ChartSpec evaluate_scatter_chart(const ForecastStudy& study) {
    ChartSpec spec;
    spec.kind = ChartKind::Scatter;
    spec.title = "Predicted vs Actual PM2.5 (" + std::to_string(study.test_year) + ")";
    spec.x_label = "Actual PM2.5 (µg/m³)";
    spec.y_label = "Predicted PM2.5 (µg/m³)";
    ChartSeries series;
    series.label = "countries";
    for (const auto& row : study.rows) {
        if (row.actual) series.points.push_back({*row.actual, row.predicted});
    }
    spec.series.push_back(std::move(series));
    return spec;
}

// ---- study runners ----------------------------------------------------------

struct StudyOutcome {
    std::vector<StudyReport> reports;
    int ok_count = 0;
    int empty_count = 0;
};

void summarize_empty(const StudyReport& report) {
    std::cerr << report.study << ": empty study (" << report.reason << ")\n";
}

void run_trends(const Dataset& ds, OutputWriter& writer, StudyOutcome& outcome) {
    TrendStudy study = regional_trends(ds);
    StudyReport report = make_trends_report(ds, study);
    writer.write_tables(report);
    // Charts keep gaps even when tables zero-fill: draw from observed values.
    const bool zero_filled = ds.fill_policy == FillPolicy::ZeroFill;
    const Dataset observed = zero_filled ? with_fill_policy(ds, FillPolicy::Exclude) : ds;
    const TrendStudy observed_study = zero_filled ? regional_trends(observed) : study;
    for (Region region : kAllRegions) {
        ChartSpec spec = trend_chart_for_region(observed, region);
        if (!spec.series.empty()) {
            writer.write_chart("trends_" + region_slug(region) + ".svg", spec);
        }
    }
    writer.write_chart("trends_overall.svg", trend_chart_overall(observed_study));
    std::cout << "trends: " << study.contributors.size() << " countries across "
              << study.table.cells.size() << " regions (" << study.exclusions.size()
              << " excluded)\n";
    outcome.reports.push_back(std::move(report));
    outcome.ok_count += 1;
}

void run_deaths(const Dataset& ds, OutputWriter& writer, StudyOutcome& outcome) {
    DeathStudy study = death_rate_summary(ds);
    StudyReport report = make_deaths_report(ds, study);
    writer.write_tables(report);
    writer.write_chart("deaths_regional.svg", deaths_regional_chart(study));
    if (!study.south_asia.empty()) {
        writer.write_chart("deaths_south_asia.svg", deaths_south_asia_chart(study));
    }
    std::cout << "deaths: " << study.contributors.size() << " countries with death-rate data ("
              << study.exclusions.size() << " excluded)\n";
    outcome.reports.push_back(std::move(report));
    outcome.ok_count += 1;
}

void run_correlate_density(const Dataset& ds, OutputWriter& writer, StudyOutcome& outcome) {
    CorrelationStudy study = corr_density_pm25(ds);
    StudyReport report = make_correlation_report(
        ds, "correlate_density", study,
        ordered_json{{"x", "population density"}, {"y", "PM2.5 2023"}});
    writer.write_tables(report);
    writer.write_chart("corr_density.svg",
                       correlation_heatmap("Correlation: PM2.5 (2023) vs Population Density",
                                           "PM2.5 2023", "Density", study.overall));
    std::ostringstream line;
    line.precision(4);
    line << "correlate_density: r=" << study.overall << " over " << study.pairs << " countries\n";
    std::cout << line.str();
    outcome.reports.push_back(std::move(report));
    outcome.ok_count += 1;
}

void run_correlate_deaths(const Dataset& ds, Pm25Window window, bool region_level,
                          OutputWriter& writer, StudyOutcome& outcome) {
    const std::string window_name = window == Pm25Window::Y2018to2023 ? "2018-2023" : "2018-2021";
    const std::string id = "correlate_deaths_" +
        (window == Pm25Window::Y2018to2023 ? std::string("2018_2023") : std::string("2018_2021"));
    CorrelationStudy study = corr_pm25_deaths(ds, window, region_level);
    StudyReport report = make_correlation_report(
        ds, id, study,
        ordered_json{{"x", "mean PM2.5 " + window_name},
                     {"y", "mean death rate 2018-2021"},
                     {"level", region_level ? "region" : "country"}});
    writer.write_tables(report);
    writer.write_chart("corr_deaths_" +
                           (window == Pm25Window::Y2018to2023 ? std::string("2018_2023")
                                                              : std::string("2018_2021")) +
                           ".svg",
                       correlation_heatmap("Correlation: Mean PM2.5 (" + window_name +
                                               ") vs Mean Death Rate (2018-2021)",
                                           "PM2.5 " + window_name, "Deaths 18-21",
                                           study.overall));
    std::ostringstream line;
    line.precision(4);
    line << id << ": r=" << study.overall << " over " << study.pairs
         << (region_level ? " regions\n" : " countries\n");
    std::cout << line.str();
    outcome.reports.push_back(std::move(report));
    outcome.ok_count += 1;
}

void run_cluster(const Dataset& ds, int k, int k_max, std::uint64_t seed,
                 OutputWriter& writer, StudyOutcome& outcome) {
    ClusterStudy study = cluster_study(ds, k, k_max, seed);
    StudyReport report = make_cluster_report(ds, study, seed, k_max);
    writer.write_tables(report);
    writer.write_chart("elbow.svg", elbow_chart(study.elbow));
    writer.write_chart("clusters.svg", cluster_chart(ds, study.model));
    std::ostringstream line;
    line.precision(6);
    line << "cluster: k=" << study.model.k << " (knee=" << study.elbow.knee << "), wcss="
         << study.model.wcss << ", " << study.model.assignments.size() << " countries ("
         << study.exclusions.size() << " excluded)\n";
    std::cout << line.str();
    outcome.reports.push_back(std::move(report));
    outcome.ok_count += 1;
}

void run_forecast(const Dataset& ds, int train_end, int test_year,
                  std::optional<ArimaOrder> order, const std::string& study_id,
                  OutputWriter& writer, StudyOutcome& outcome) {
    ForecastStudy study = forecast_study(ds, train_end, test_year, order);
    const bool benchmark = study_id == "evaluate";
    StudyReport report = make_forecast_report(ds, study, study_id, benchmark);
    writer.write_tables(report);
    if (study.metrics) {
        writer.write_chart(study_id + "_scatter.svg", evaluate_scatter_chart(study));
    }

    std::ostringstream line;
    line.precision(4);
    line << study_id << ": " << study.rows.size() << " countries, train " << study.train_start
         << "-" << study.train_end << ", test " << study.test_year;
    if (study.metrics) {
        line << ", MAE=" << study.metrics->mae << ", RMSE=" << study.metrics->rmse << ", R2=";
        if (study.metrics->r_squared) {
            line << *study.metrics->r_squared;
        } else {
            line << "n/a";
        }
    } else {
        line << " (no actuals; metrics not available)";
    }
    line << " (" << study.exclusions.size() << " excluded)\n";
    std::cout << line.str();
    if (benchmark && study.metrics) {
        const auto& m = *study.metrics;
        std::ostringstream bench;
        bench.precision(4);
        auto pct = [](double value, double reference) {
            return (value - reference) / reference * 100.0;
        };
        bench << "  benchmark: MAE " << kReference2023.mae << " (" << pct(m.mae, kReference2023.mae)
              << "%), MSE " << kReference2023.mse << " (" << pct(m.mse, kReference2023.mse)
              << "%), RMSE " << kReference2023.rmse << " (" << pct(m.rmse, kReference2023.rmse)
              << "%), R2 " << kReference2023.r_squared;
        if (m.r_squared) {
            bench << " (" << pct(*m.r_squared, kReference2023.r_squared) << "%)";
        }
        bench << "\n";
        std::cout << bench.str();
    }
    outcome.reports.push_back(std::move(report));
    outcome.ok_count += 1;
}

// Data insufficiency must not abort a run: the study is recorded as empty with
// its reason, and the command exits 2 only if nothing at all succeeded.
template <typename Fn>
void run_tolerating_empty(const Dataset& ds, const std::string& study_id,
                          StudyOutcome& outcome, Fn&& fn) {
    try {
        fn();
    } catch (const EmptyStudyError& e) {
        outcome.reports.push_back(
            make_empty_report(ds, study_id, e.what(), ordered_json::object()));
        outcome.empty_count += 1;
        summarize_empty(outcome.reports.back());
    } catch (const DegenerateInputError& e) {
        outcome.reports.push_back(
            make_empty_report(ds, study_id, e.what(), ordered_json::object()));
        outcome.empty_count += 1;
        summarize_empty(outcome.reports.back());
    }
}

void finish(const Dataset& ds, const CommonOptions& opts, const std::string& command,
            const ordered_json& parameters, OutputWriter& writer,
            const StudyOutcome& outcome) {
    if (writer.json_enabled()) {
        ordered_json report;
        report["toolkit"] = {{"name", kToolkitName}, {"version", kToolkitVersion}};
        report["dataset"] = dataset_meta_json(ds);
        ordered_json studies = ordered_json::array();
        for (const auto& s : outcome.reports) studies.push_back(s.to_json());
        report["studies"] = std::move(studies);
        writer.write_text("report.json", report.dump(2) + "\n");
    }

    ordered_json manifest;
    manifest["command"] = command;
    manifest["toolkit_version"] = kToolkitVersion;
    manifest["dataset_hash"] = dataset_hash(ds);
    manifest["parameters"] = parameters;
    manifest["outputs"] = writer.sorted_outputs();
    std::ofstream out(fs::path(opts.out) / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
}

ordered_json common_parameters(const CommonOptions& opts) {
    return ordered_json{{"input", opts.embedded ? "embedded" : opts.input},
                        {"fill_policy", opts.fill},
                        {"seed", opts.seed},
                        {"format", opts.format}};
}

} // namespace

int run_command(const std::vector<std::string>& argv) {
    CLI::App app{"Country-level PM2.5 analytics: trends, death rates, correlations, "
                 "clustering, and forecasting"};
    app.name("pm25");
    app.set_version_flag("--version", std::string(kToolkitVersion));
    app.require_subcommand(1);

    CommonOptions opts;
    int k = 3;
    int k_max = 8;
    int report_k = 0;
    std::string correlate_study = "all";
    std::string window = "both";
    bool by_region = false;
    int train_end = 0;
    int test_year = 0;
    std::string order_text;

    CLI::App* trends = app.add_subcommand("trends", "Regional PM2.5 trend tables and charts");
    add_common_options(trends, opts);

    CLI::App* deaths = app.add_subcommand("deaths", "Regional death-rate summaries");
    add_common_options(deaths, opts);

    CLI::App* correlate = app.add_subcommand("correlate", "Correlation studies");
    add_common_options(correlate, opts);
    correlate->add_option("--study", correlate_study, "Which correlation: density|deaths|all")
        ->check(CLI::IsMember({"density", "deaths", "all"}));
    correlate->add_option("--window", window, "PM2.5 window for the deaths study")
        ->check(CLI::IsMember({"2018-2023", "2018-2021", "both"}));
    correlate->add_flag("--by-region", by_region, "Correlate region-level means instead of countries");

    CLI::App* cluster = app.add_subcommand("cluster", "K-means pollution-level clustering");
    add_common_options(cluster, opts);
    cluster->add_option("--k", k, "Cluster count; 0 selects the elbow knee")
        ->check(CLI::Range(0, 32));
    cluster->add_option("--k-max", k_max, "Largest k for the elbow curve")->check(CLI::Range(2, 32));

    CLI::App* forecast_cmd = app.add_subcommand("forecast", "Fit per-country models and forecast");
    add_common_options(forecast_cmd, opts);
    forecast_cmd->add_option("--train-end", train_end, "Last training year (default 2023)");
    forecast_cmd->add_option("--test-year", test_year, "Forecast target year (default 2024)");
    forecast_cmd->add_option("--order", order_text, "Manual order p,d,q[,drift]");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Train/test forecast evaluation");
    add_common_options(evaluate, opts);
    evaluate->add_option("--train-end", train_end, "Last training year (default 2022)");
    evaluate->add_option("--test-year", test_year, "Evaluation year (default 2023)");
    evaluate->add_option("--order", order_text, "Manual order p,d,q[,drift]");

    CLI::App* report_cmd = app.add_subcommand("report", "Run every study");
    add_common_options(report_cmd, opts);
    report_cmd->add_option("--k", report_k, "Cluster count; 0 selects the elbow knee")
        ->check(CLI::Range(0, 32));
    report_cmd->add_option("--k-max", k_max, "Largest k for the elbow curve")
        ->check(CLI::Range(2, 32));

    try {
        std::vector<std::string> args(argv.rbegin(), argv.rend()); // CLI11 wants reversed args
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kToolkitVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        const Dataset ds = load_from_options(opts);
        OutputWriter writer(opts);
        StudyOutcome outcome;

        std::optional<ArimaOrder> order;
        if (!order_text.empty()) order = ArimaOrder::parse(order_text);

        if (trends->parsed()) {
            run_tolerating_empty(ds, "trends", outcome, [&] { run_trends(ds, writer, outcome); });
            finish(ds, opts, "trends", common_parameters(opts), writer, outcome);
        } else if (deaths->parsed()) {
            run_tolerating_empty(ds, "deaths", outcome, [&] { run_deaths(ds, writer, outcome); });
            finish(ds, opts, "deaths", common_parameters(opts), writer, outcome);
        } else if (correlate->parsed()) {
            if (correlate_study == "density" || correlate_study == "all") {
                run_tolerating_empty(ds, "correlate_density", outcome,
                                     [&] { run_correlate_density(ds, writer, outcome); });
            }
            if (correlate_study == "deaths" || correlate_study == "all") {
                if (window == "2018-2023" || window == "both") {
                    run_tolerating_empty(ds, "correlate_deaths_2018_2023", outcome, [&] {
                        run_correlate_deaths(ds, Pm25Window::Y2018to2023, by_region, writer,
                                             outcome);
                    });
                }
                if (window == "2018-2021" || window == "both") {
                    run_tolerating_empty(ds, "correlate_deaths_2018_2021", outcome, [&] {
                        run_correlate_deaths(ds, Pm25Window::Y2018to2021, by_region, writer,
                                             outcome);
                    });
                }
            }
            ordered_json params = common_parameters(opts);
            params["study"] = correlate_study;
            params["window"] = window;
            params["by_region"] = by_region;
            finish(ds, opts, "correlate", params, writer, outcome);
        } else if (cluster->parsed()) {
            run_tolerating_empty(ds, "cluster", outcome, [&] {
                run_cluster(ds, k, k_max, opts.seed, writer, outcome);
            });
            ordered_json params = common_parameters(opts);
            params["k"] = k;
            params["k_max"] = k_max;
            finish(ds, opts, "cluster", params, writer, outcome);
        } else if (forecast_cmd->parsed()) {
            if (train_end == 0) train_end = 2023;
            if (test_year == 0) test_year = train_end + 1;
            run_tolerating_empty(ds, "forecast", outcome, [&] {
                run_forecast(ds, train_end, test_year, order, "forecast", writer, outcome);
            });
            ordered_json params = common_parameters(opts);
            params["train_end"] = train_end;
            params["test_year"] = test_year;
            if (order) params["order"] = order->str();
            finish(ds, opts, "forecast", params, writer, outcome);
        } else if (evaluate->parsed()) {
            if (train_end == 0) train_end = 2022;
            if (test_year == 0) test_year = train_end + 1;
            run_tolerating_empty(ds, "evaluate", outcome, [&] {
                run_forecast(ds, train_end, test_year, order, "evaluate", writer, outcome);
            });
            ordered_json params = common_parameters(opts);
            params["train_end"] = train_end;
            params["test_year"] = test_year;
            if (order) params["order"] = order->str();
            finish(ds, opts, "evaluate", params, writer, outcome);
        } else if (report_cmd->parsed()) {
            run_tolerating_empty(ds, "trends", outcome, [&] { run_trends(ds, writer, outcome); });
            run_tolerating_empty(ds, "deaths", outcome, [&] { run_deaths(ds, writer, outcome); });
            run_tolerating_empty(ds, "correlate_density", outcome,
                                 [&] { run_correlate_density(ds, writer, outcome); });
            run_tolerating_empty(ds, "correlate_deaths_2018_2023", outcome, [&] {
                run_correlate_deaths(ds, Pm25Window::Y2018to2023, false, writer, outcome);
            });
            run_tolerating_empty(ds, "correlate_deaths_2018_2021", outcome, [&] {
                run_correlate_deaths(ds, Pm25Window::Y2018to2021, false, writer, outcome);
            });
            run_tolerating_empty(ds, "cluster", outcome, [&] {
                run_cluster(ds, report_k, k_max, opts.seed, writer, outcome);
            });
            run_tolerating_empty(ds, "evaluate", outcome, [&] {
                run_forecast(ds, 2022, 2023, order, "evaluate", writer, outcome);
            });
            run_tolerating_empty(ds, "forecast", outcome, [&] {
                run_forecast(ds, 2023, 2024, order, "forecast", writer, outcome);
            });
            ordered_json params = common_parameters(opts);
            params["k"] = report_k;
            params["k_max"] = k_max;
            finish(ds, opts, "report", params, writer, outcome);
        }
        return outcome.ok_count > 0 ? 0 : 2;
    } catch (const EmptyStudyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace pm25
