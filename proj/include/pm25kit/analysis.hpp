#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pm25kit/arima.hpp"
#include "pm25kit/clustering.hpp"
#include "pm25kit/data_model.hpp"
#include "pm25kit/stats.hpp"

namespace pm25 {

struct Exclusion {
    std::string country;
    std::string reason;
};

struct TrendCell {
    double mean = 0.0;
    int count = 0; // contributing countries; cells with zero contributors are absent
};

/// (region, year) -> average PM2.5 over countries with a present value.
struct RegionalTrendTable {
    std::map<Region, std::map<int, TrendCell>> cells;

    std::optional<TrendCell> at(Region region, int year) const;
};

struct TrendStudy {
    RegionalTrendTable table;
    std::vector<std::string> contributors; // countries with at least one value
    std::vector<Exclusion> exclusions;
};

TrendStudy regional_trends(const Dataset& ds);

struct DeathStudy {
    std::map<Region, std::map<int, TrendCell>> regional;        // years 2018-2021
    std::map<std::string, std::map<int, double>> south_asia;    // per-country rates
    std::vector<std::string> contributors;
    std::vector<Exclusion> exclusions;
};

/// Throws EmptyStudyError when the dataset carries no death-rate data at all.
DeathStudy death_rate_summary(const Dataset& ds);

struct CorrelationStudy {
    double overall = 0.0;
    std::size_t pairs = 0;
    // Per-region coefficient; absent when a region has < 2 pairs or zero variance.
    std::map<Region, std::optional<double>> by_region;
    std::vector<std::string> contributors;
    std::vector<Exclusion> exclusions;
};

/// Pearson over (population density, 2023 PM2.5) pairs, overall and per region.
/// Observed values only: zero-filled placeholders are ignored.
CorrelationStudy corr_density_pm25(const Dataset& ds);

enum class Pm25Window { Y2018to2023, Y2018to2021 };

/// Pearson of per-country (mean PM2.5 over the window, mean death rate
/// 2018-2021). `region_level` averages the country means per region first.
CorrelationStudy corr_pm25_deaths(const Dataset& ds, Pm25Window window,
                                  bool region_level = false);

struct ClusterStudy {
    ElbowCurve elbow;
    ClusterModel model;
    RawTransform transform; // standardization of the 2023 values
    std::vector<Exclusion> exclusions;
};

/// Standardizes 2023 PM2.5 values, builds the elbow curve, and fits K-means.
/// k = 0 selects the elbow knee automatically; k = 3 gets pollution labels.
ClusterStudy cluster_study(const Dataset& ds, int k, int k_max, std::uint64_t seed);

struct CountryForecast {
    std::string country;
    Region region{};
    ArimaOrder order;
    double aicc = 0.0;
    double predicted_raw = 0.0; // model output
    double predicted = 0.0;     // reported value, floored at 0
    std::optional<double> actual;
    std::optional<double> error; // actual - predicted
};

struct ForecastStudy {
    int train_start = 2018;
    int train_end = 2022;
    int test_year = 2023;
    std::vector<CountryForecast> rows;     // country-name order
    std::optional<MetricsBundle> metrics;  // pooled; absent without actuals
    std::vector<Exclusion> exclusions;
};

/// Per country with a complete PM2.5 series over [2018, train_end] (at least 4
/// years): order selection (or `order_override`), fit, and the forecast for
/// test_year. Metrics pool all (actual, reported forecast) pairs; countries
/// with no test-year actual become forecast-only rows. Throws EmptyStudyError
/// when no country qualifies.
ForecastStudy forecast_study(const Dataset& ds, int train_end, int test_year,
                             std::optional<ArimaOrder> order_override = {});

} // namespace pm25
