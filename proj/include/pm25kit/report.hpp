#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "pm25kit/analysis.hpp"

namespace pm25 {

using ordered_json = nlohmann::ordered_json;

/// One named table of a study report. Cells are JSON scalars; null marks an
/// absent observation (CSV serializes it as an empty field, never 0).
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<ordered_json>> rows;
};

struct StudyReport {
    std::string study;
    std::string status = "ok"; // "ok" or "empty"
    std::string reason;        // set when status == "empty"
    std::string source;
    ordered_json parameters = ordered_json::object();
    std::vector<ResultTable> tables;
    std::vector<Exclusion> exclusions;

    ordered_json to_json() const;
};

/// Reference benchmark for the 2023 Asia-wide PM2.5 ARIMA evaluation; the
/// evaluate report prints computed metrics beside these with percent deviation.
struct ReferenceMetrics {
    double mae;
    double mse;
    double rmse;
    double r_squared;
};

inline constexpr ReferenceMetrics kReference2023{3.99, 33.80, 5.81, 0.86};

StudyReport make_trends_report(const Dataset& ds, const TrendStudy& study);
StudyReport make_deaths_report(const Dataset& ds, const DeathStudy& study);
StudyReport make_correlation_report(const Dataset& ds, const std::string& study_id,
                                    const CorrelationStudy& study,
                                    const ordered_json& parameters);
StudyReport make_cluster_report(const Dataset& ds, const ClusterStudy& study,
                                std::uint64_t seed, int k_max);
StudyReport make_forecast_report(const Dataset& ds, const ForecastStudy& study,
                                 const std::string& study_id, bool benchmark_comparison);
StudyReport make_empty_report(const Dataset& ds, const std::string& study_id,
                              const std::string& reason, const ordered_json& parameters);

/// Dataset summary block used at the top of report.json and in manifests.
ordered_json dataset_meta_json(const Dataset& ds);

/// Table -> RFC 4180 CSV with a header row; null cells become empty fields.
std::string table_to_csv(const ResultTable& table);

} // namespace pm25
