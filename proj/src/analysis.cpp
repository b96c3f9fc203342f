#include "pm25kit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pm25 {

namespace {

// Correlation studies run on observed values only; under ZeroFill the stored
// zeros are placeholders and would manufacture correlation, so drop them.
Dataset observed_view(const Dataset& ds) {
    if (ds.fill_policy == FillPolicy::Exclude) return ds;
    return with_fill_policy(ds, FillPolicy::Exclude);
}

std::vector<const CountryRecord*> by_country_name(const Dataset& ds) {
    std::vector<const CountryRecord*> recs;
    recs.reserve(ds.records.size());
    for (const auto& rec : ds.records) recs.push_back(&rec);
    std::sort(recs.begin(), recs.end(), [](const CountryRecord* a, const CountryRecord* b) {
        return a->country < b->country;
    });
    return recs;
}

std::optional<double> mean_of(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

std::string join_years(const std::vector<int>& years) {
    std::ostringstream out;
    for (std::size_t i = 0; i < years.size(); ++i) {
        if (i) out << ", ";
        out << years[i];
    }
    return out.str();
}

} // namespace

std::optional<TrendCell> RegionalTrendTable::at(Region region, int year) const {
    auto rit = cells.find(region);
    if (rit == cells.end()) return std::nullopt;
    auto yit = rit->second.find(year);
    if (yit == rit->second.end()) return std::nullopt;
    return yit->second;
}

TrendStudy regional_trends(const Dataset& ds) {
    if (ds.records.empty()) throw EmptyStudyError("regional_trends: dataset has no records");

    TrendStudy study;
    std::map<Region, std::map<int, std::pair<double, int>>> acc;
    for (const auto* rec : by_country_name(ds)) {
        if (rec->pm25.empty()) {
            study.exclusions.push_back({rec->country, "no PM2.5 observations"});
            continue;
        }
        study.contributors.push_back(rec->country);
        for (const auto& [year, value] : rec->pm25.items()) {
            auto& cell = acc[rec->region][year];
            cell.first += value;
            cell.second += 1;
        }
    }
    for (const auto& [region, years] : acc) {
        for (const auto& [year, sum_count] : years) {
            study.table.cells[region][year] =
                TrendCell{sum_count.first / sum_count.second, sum_count.second};
        }
    }
    return study;
}

DeathStudy death_rate_summary(const Dataset& ds) {
    DeathStudy study;
    std::map<Region, std::map<int, std::pair<double, int>>> acc;
    for (const auto* rec : by_country_name(ds)) {
        if (rec->deaths.empty()) {
            study.exclusions.push_back({rec->country, "no death-rate data"});
            continue;
        }
        study.contributors.push_back(rec->country);
        for (const auto& [year, rate] : rec->deaths) {
            auto& cell = acc[rec->region][year];
            cell.first += rate;
            cell.second += 1;
        }
        if (rec->region == Region::SouthAsia) {
            study.south_asia[rec->country] = rec->deaths;
        }
    }
    if (study.contributors.empty()) {
        throw EmptyStudyError(
            "death-rate study: the dataset carries no death-rate values; supply the "
            "full CSV with Death_2018..Death_2021 columns");
    }
    for (const auto& [region, years] : acc) {
        for (const auto& [year, sum_count] : years) {
            study.regional[region][year] =
                TrendCell{sum_count.first / sum_count.second, sum_count.second};
        }
    }
    return study;
}

CorrelationStudy corr_density_pm25(const Dataset& ds) {
    const Dataset view = observed_view(ds);
    CorrelationStudy study;
    std::map<Region, std::pair<std::vector<double>, std::vector<double>>> per_region;
    std::vector<double> xs, ys;
    for (const auto* rec : by_country_name(view)) {
        const auto pm = rec->pm25.get(2023);
        if (!rec->density && !pm) {
            study.exclusions.push_back({rec->country, "missing density and 2023 PM2.5"});
            continue;
        }
        if (!rec->density) {
            study.exclusions.push_back({rec->country, "missing population density"});
            continue;
        }
        if (!pm) {
            study.exclusions.push_back({rec->country, "missing 2023 PM2.5"});
            continue;
        }
        study.contributors.push_back(rec->country);
        xs.push_back(*rec->density);
        ys.push_back(*pm);
        per_region[rec->region].first.push_back(*rec->density);
        per_region[rec->region].second.push_back(*pm);
    }
    if (xs.size() < 2) {
        throw EmptyStudyError(
            "density correlation: fewer than 2 countries have both population density "
            "and a 2023 PM2.5 value; supply the full CSV");
    }
    study.pairs = xs.size();
    study.overall = pearson(xs, ys);
    for (const auto& [region, vecs] : per_region) {
        if (vecs.first.size() < 2) {
            study.by_region[region] = std::nullopt;
            continue;
        }
        try {
            study.by_region[region] = pearson(vecs.first, vecs.second);
        } catch (const DegenerateInputError&) {
            study.by_region[region] = std::nullopt;
        }
    }
    return study;
}

CorrelationStudy corr_pm25_deaths(const Dataset& ds, Pm25Window window, bool region_level) {
    const Dataset view = observed_view(ds);
    const int last_year = window == Pm25Window::Y2018to2023 ? 2023 : 2021;

    CorrelationStudy study;
    std::vector<double> xs, ys;
    std::map<Region, std::pair<std::vector<double>, std::vector<double>>> per_region;
    for (const auto* rec : by_country_name(view)) {
        std::vector<double> pm_values;
        for (int year = 2018; year <= last_year; ++year) {
            if (auto v = rec->pm25.get(year)) pm_values.push_back(*v);
        }
        std::vector<double> death_values;
        for (const auto& [year, rate] : rec->deaths) death_values.push_back(rate);

        const auto pm_mean = mean_of(pm_values);
        const auto death_mean = mean_of(death_values);
        if (!pm_mean && !death_mean) {
            study.exclusions.push_back({rec->country, "no PM2.5 or death-rate data"});
            continue;
        }
        if (!pm_mean) {
            study.exclusions.push_back(
                {rec->country, "no PM2.5 values in 2018-" + std::to_string(last_year)});
            continue;
        }
        if (!death_mean) {
            study.exclusions.push_back({rec->country, "no death-rate data"});
            continue;
        }
        study.contributors.push_back(rec->country);
        xs.push_back(*pm_mean);
        ys.push_back(*death_mean);
        per_region[rec->region].first.push_back(*pm_mean);
        per_region[rec->region].second.push_back(*death_mean);
    }

    if (region_level) {
        std::vector<double> rx, ry;
        for (const auto& [region, vecs] : per_region) {
            rx.push_back(*mean_of(vecs.first));
            ry.push_back(*mean_of(vecs.second));
        }
        xs = std::move(rx);
        ys = std::move(ry);
    }
    if (xs.size() < 2) {
        throw EmptyStudyError(
            "PM2.5/death-rate correlation: fewer than 2 entries have both mean PM2.5 "
            "and mean death rate; supply the full CSV");
    }
    study.pairs = xs.size();
    study.overall = pearson(xs, ys);
    if (!region_level) {
        for (const auto& [region, vecs] : per_region) {
            if (vecs.first.size() < 2) {
                study.by_region[region] = std::nullopt;
                continue;
            }
            try {
                study.by_region[region] = pearson(vecs.first, vecs.second);
            } catch (const DegenerateInputError&) {
                study.by_region[region] = std::nullopt;
            }
        }
    }
    return study;
}

ClusterStudy cluster_study(const Dataset& ds, int k, int k_max, std::uint64_t seed) {
    ClusterStudy study;
    std::vector<ClusterPoint> raw_points;
    for (const auto* rec : by_country_name(ds)) {
        if (auto v = rec->pm25.get(2023)) {
            raw_points.push_back({rec->country, *v});
        } else {
            study.exclusions.push_back({rec->country, "no 2023 PM2.5 value"});
        }
    }
    if (raw_points.size() < 2) {
        throw EmptyStudyError("cluster study: fewer than 2 countries have a 2023 PM2.5 value");
    }

    std::vector<double> values;
    values.reserve(raw_points.size());
    for (const auto& p : raw_points) values.push_back(p.value);
    study.transform.mean = mean(values);
    study.transform.stddev = stddev_pop(values);
    if (study.transform.stddev == 0.0) {
        throw DegenerateInputError("cluster study: all 2023 PM2.5 values are identical");
    }

    std::vector<ClusterPoint> std_points = raw_points;
    for (auto& p : std_points) {
        p.value = (p.value - study.transform.mean) / study.transform.stddev;
    }

    k_max = std::min<int>(k_max, static_cast<int>(std_points.size()));
    study.elbow = elbow_curve(std_points, k_max, seed, study.transform);
    const int k_use = k > 0 ? k : study.elbow.knee;
    if (static_cast<std::size_t>(k_use) > std_points.size()) {
        throw ArgumentError("cluster study: k exceeds number of clusterable countries");
    }
    study.model = kmeans_fit(std_points, k_use, seed, study.transform);
    if (k_use == 3) study.model = label_clusters(std::move(study.model));
    return study;
}

ForecastStudy forecast_study(const Dataset& ds, int train_end, int test_year,
                             std::optional<ArimaOrder> order_override) {
    if (train_end < 2021 || train_end > 2023) {
        throw ArgumentError("forecast study: train-end must lie in 2021-2023 "
                            "(at least 4 training years ending before the test year)");
    }
    if (test_year <= train_end || test_year > YearSeries::kLastYear) {
        throw ArgumentError("forecast study: test year must follow train-end and not "
                            "exceed " + std::to_string(YearSeries::kLastYear));
    }

    ForecastStudy study;
    study.train_start = 2018;
    study.train_end = train_end;
    study.test_year = test_year;

    std::vector<double> actuals, predictions;
    for (const auto* rec : by_country_name(ds)) {
        std::vector<int> missing;
        std::vector<double> series;
        for (int year = 2018; year <= train_end; ++year) {
            if (auto v = rec->pm25.get(year)) {
                series.push_back(*v);
            } else {
                missing.push_back(year);
            }
        }
        if (!missing.empty()) {
            study.exclusions.push_back(
                {rec->country, "missing PM2.5 in training window: " + join_years(missing)});
            continue;
        }

        CountryForecast row;
        row.country = rec->country;
        row.region = rec->region;
        try {
            row.order = order_override ? *order_override : select_order(series);
            ArimaModel model = fit(series, row.order);
            row.aicc = aicc(model);
            const int horizon = test_year - train_end;
            row.predicted_raw = forecast(model, horizon).back();
        } catch (const DegenerateFitError& e) {
            study.exclusions.push_back({rec->country, std::string("model fit failed: ") + e.what()});
            continue;
        } catch (const InsufficientDataError& e) {
            study.exclusions.push_back({rec->country, e.what()});
            continue;
        }
        row.predicted = std::max(0.0, row.predicted_raw);
        row.actual = rec->pm25.get(test_year);
        if (row.actual) {
            row.error = *row.actual - row.predicted;
            actuals.push_back(*row.actual);
            predictions.push_back(row.predicted);
        }
        study.rows.push_back(std::move(row));
    }

    if (study.rows.empty()) {
        throw EmptyStudyError(
            "forecast study: no country has a complete PM2.5 series for 2018-" +
            std::to_string(train_end) + "; supply the full CSV");
    }
    if (!actuals.empty()) {
        study.metrics = evaluate_forecasts(actuals, predictions);
    }
    return study;
}

} // namespace pm25
