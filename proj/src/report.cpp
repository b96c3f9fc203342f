#include "pm25kit/report.hpp"

#include <charconv>
#include <cmath>

#include "pm25kit/version.hpp"

namespace pm25 {

namespace {

ordered_json num_or_null(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::string csv_field(const ordered_json& cell) {
    std::string text;
    if (cell.is_null()) {
        return "";
    } else if (cell.is_string()) {
        text = cell.get<std::string>();
    } else if (cell.is_number_float()) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), cell.get<double>());
        (void)ec;
        text.assign(buf, ptr);
    } else {
        text = cell.dump();
    }
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ordered_json exclusions_json(const std::vector<Exclusion>& exclusions) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : exclusions) {
        arr.push_back({{"country", e.country}, {"reason", e.reason}});
    }
    return arr;
}

} // namespace

ordered_json dataset_meta_json(const Dataset& ds) {
    return ordered_json{
        {"source", ds.source},
        {"hash", dataset_hash(ds)},
        {"fill_policy", std::string(fill_policy_name(ds.fill_policy))},
        {"countries", ds.records.size()},
    };
}

ordered_json StudyReport::to_json() const {
    ordered_json out;
    out["study"] = study;
    out["status"] = status;
    if (!reason.empty()) out["reason"] = reason;
    out["source"] = source;
    out["parameters"] = parameters;
    ordered_json tbls = ordered_json::array();
    for (const auto& table : tables) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : table.rows) {
            ordered_json r = ordered_json::array();
            for (const auto& cell : row) r.push_back(cell);
            rows.push_back(std::move(r));
        }
        tbls.push_back({{"name", table.name}, {"columns", table.columns}, {"rows", rows}});
    }
    out["tables"] = std::move(tbls);
    out["exclusions"] = exclusions_json(exclusions);
    return out;
}

std::string table_to_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(table.columns[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += '\n';
    }
    return out;
}

StudyReport make_trends_report(const Dataset& ds, const TrendStudy& study) {
    StudyReport report;
    report.study = "trends";
    report.source = ds.source;
    report.parameters = {{"fill_policy", std::string(fill_policy_name(ds.fill_policy))},
                         {"years", "2018-2023"}};
    report.exclusions = study.exclusions;

    ResultTable means{"regional_means", {"region"}, {}};
    ResultTable counts{"regional_counts", {"region"}, {}};
    for (int year = 2018; year <= 2023; ++year) {
        means.columns.push_back(std::to_string(year));
        counts.columns.push_back(std::to_string(year));
    }
    for (Region region : kAllRegions) {
        std::vector<ordered_json> mean_row{std::string(region_name(region))};
        std::vector<ordered_json> count_row{std::string(region_name(region))};
        for (int year = 2018; year <= 2023; ++year) {
            auto cell = study.table.at(region, year);
            mean_row.push_back(cell ? ordered_json(cell->mean) : ordered_json(nullptr));
            count_row.push_back(cell ? ordered_json(cell->count) : ordered_json(nullptr));
        }
        means.rows.push_back(std::move(mean_row));
        counts.rows.push_back(std::move(count_row));
    }
    report.tables.push_back(std::move(means));
    report.tables.push_back(std::move(counts));
    return report;
}

StudyReport make_deaths_report(const Dataset& ds, const DeathStudy& study) {
    StudyReport report;
    report.study = "deaths";
    report.source = ds.source;
    report.parameters = {{"years", "2018-2021"}};
    report.exclusions = study.exclusions;

    ResultTable regional{"regional", {"region"}, {}};
    for (int year = 2018; year <= 2021; ++year) regional.columns.push_back(std::to_string(year));
    for (Region region : kAllRegions) {
        auto rit = study.regional.find(region);
        std::vector<ordered_json> row{std::string(region_name(region))};
        for (int year = 2018; year <= 2021; ++year) {
            if (rit != study.regional.end() && rit->second.count(year)) {
                row.push_back(rit->second.at(year).mean);
            } else {
                row.push_back(nullptr);
            }
        }
        regional.rows.push_back(std::move(row));
    }
    report.tables.push_back(std::move(regional));

    ResultTable south{"south_asia", {"country"}, {}};
    for (int year = 2018; year <= 2021; ++year) south.columns.push_back(std::to_string(year));
    for (const auto& [country, rates] : study.south_asia) {
        std::vector<ordered_json> row{country};
        for (int year = 2018; year <= 2021; ++year) {
            auto it = rates.find(year);
            row.push_back(it == rates.end() ? ordered_json(nullptr) : ordered_json(it->second));
        }
        south.rows.push_back(std::move(row));
    }
    report.tables.push_back(std::move(south));
    return report;
}

StudyReport make_correlation_report(const Dataset& ds, const std::string& study_id,
                                    const CorrelationStudy& study,
                                    const ordered_json& parameters) {
    StudyReport report;
    report.study = study_id;
    report.source = ds.source;
    report.parameters = parameters;
    report.parameters["note"] =
        "observed values only; zero-filled placeholders are never correlated";
    report.exclusions = study.exclusions;

    ResultTable overall{"overall", {"scope", "pearson_r", "pairs"}, {}};
    overall.rows.push_back({"overall", study.overall, study.pairs});
    report.tables.push_back(std::move(overall));

    if (!study.by_region.empty()) {
        ResultTable regional{"by_region", {"region", "pearson_r"}, {}};
        for (const auto& [region, r] : study.by_region) {
            regional.rows.push_back({std::string(region_name(region)), num_or_null(r)});
        }
        report.tables.push_back(std::move(regional));
    }
    return report;
}

StudyReport make_cluster_report(const Dataset& ds, const ClusterStudy& study,
                                std::uint64_t seed, int k_max) {
    StudyReport report;
    report.study = "cluster";
    report.source = ds.source;
    report.parameters = {{"k", study.model.k},
                         {"k_max", k_max},
                         {"seed", seed},
                         {"knee", study.elbow.knee},
                         {"standardize_mean", study.transform.mean},
                         {"standardize_stddev", study.transform.stddev},
                         {"fill_policy", std::string(fill_policy_name(ds.fill_policy))}};
    report.exclusions = study.exclusions;

    ResultTable centers{"centers",
                        {"cluster", "center_standardized", "center_pm25", "label"}, {}};
    for (int c = 0; c < study.model.k; ++c) {
        auto it = study.model.labels.find(c);
        centers.rows.push_back({c, study.model.centers[c], study.model.raw_centers[c],
                                it == study.model.labels.end()
                                    ? ordered_json(nullptr)
                                    : ordered_json(std::string(pollution_level_name(it->second)))});
    }
    report.tables.push_back(std::move(centers));

    ResultTable assignments{"clusters", {"country", "pm25_2023", "cluster", "label"}, {}};
    for (const auto& [country, cluster] : study.model.assignments) {
        const CountryRecord* rec = ds.find(country);
        auto it = study.model.labels.find(cluster);
        assignments.rows.push_back(
            {country,
             rec && rec->pm25.get(2023) ? ordered_json(*rec->pm25.get(2023)) : ordered_json(nullptr),
             cluster,
             it == study.model.labels.end()
                 ? ordered_json(nullptr)
                 : ordered_json(std::string(pollution_level_name(it->second)))});
    }
    report.tables.push_back(std::move(assignments));

    ResultTable elbow{"elbow", {"k", "wcss"}, {}};
    for (const auto& [k, wcss] : study.elbow.wcss) elbow.rows.push_back({k, wcss});
    report.tables.push_back(std::move(elbow));

    ResultTable wcss{"fit", {"wcss"}, {{study.model.wcss}}};
    report.tables.push_back(std::move(wcss));
    return report;
}

StudyReport make_forecast_report(const Dataset& ds, const ForecastStudy& study,
                                 const std::string& study_id, bool benchmark_comparison) {
    StudyReport report;
    report.study = study_id;
    report.source = ds.source;
    report.parameters = {{"train_window",
                          std::to_string(study.train_start) + "-" + std::to_string(study.train_end)},
                         {"test_year", study.test_year},
                         {"fill_policy", std::string(fill_policy_name(ds.fill_policy))}};
    report.exclusions = study.exclusions;

    ResultTable rows{"values",
                     {"country", "region", "order", "predicted", "predicted_raw", "actual",
                      "error"}, {}};
    for (const auto& row : study.rows) {
        rows.rows.push_back({row.country, std::string(region_name(row.region)), row.order.str(),
                             row.predicted, row.predicted_raw, num_or_null(row.actual),
                             num_or_null(row.error)});
    }
    report.tables.push_back(std::move(rows));

    ResultTable metrics{"metrics", {"metric", "value"}, {}};
    if (study.metrics) {
        metrics.rows.push_back({"MAE", study.metrics->mae});
        metrics.rows.push_back({"MSE", study.metrics->mse});
        metrics.rows.push_back({"RMSE", study.metrics->rmse});
        metrics.rows.push_back({"R2", num_or_null(study.metrics->r_squared)});
        metrics.rows.push_back({"pairs", study.metrics->n});
    } else {
        // No actuals for the test year: metrics are explicitly absent, never fabricated.
        metrics.rows.push_back({"MAE", nullptr});
        metrics.rows.push_back({"MSE", nullptr});
        metrics.rows.push_back({"RMSE", nullptr});
        metrics.rows.push_back({"R2", nullptr});
        metrics.rows.push_back({"pairs", 0});
    }
    report.tables.push_back(std::move(metrics));

    if (benchmark_comparison && study.metrics) {
        const auto& m = *study.metrics;
        auto deviation = [](double value, double reference) {
            return (value - reference) / reference * 100.0;
        };
        ResultTable bench{"benchmark",
                          {"metric", "value", "reference", "deviation_pct"}, {}};
        bench.rows.push_back(
            {"MAE", m.mae, kReference2023.mae, deviation(m.mae, kReference2023.mae)});
        bench.rows.push_back(
            {"MSE", m.mse, kReference2023.mse, deviation(m.mse, kReference2023.mse)});
        bench.rows.push_back(
            {"RMSE", m.rmse, kReference2023.rmse, deviation(m.rmse, kReference2023.rmse)});
        if (m.r_squared) {
            bench.rows.push_back({"R2", *m.r_squared, kReference2023.r_squared,
                                  deviation(*m.r_squared, kReference2023.r_squared)});
        } else {
            bench.rows.push_back({"R2", nullptr, kReference2023.r_squared, nullptr});
        }
        report.tables.push_back(std::move(bench));
    }
    return report;
}

StudyReport make_empty_report(const Dataset& ds, const std::string& study_id,
                              const std::string& reason, const ordered_json& parameters) {
    StudyReport report;
    report.study = study_id;
    report.status = "empty";
    report.reason = reason;
    report.source = ds.source;
    report.parameters = parameters;
    return report;
}

} // namespace pm25
