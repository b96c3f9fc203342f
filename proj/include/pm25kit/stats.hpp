#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pm25kit/errors.hpp"

namespace pm25 {

double mean(std::span<const double> x);

/// Population (divide-by-n) standard deviation.
double stddev_pop(std::span<const double> x);

/// Sample Pearson correlation in [-1, 1]. Throws ArgumentError on length
/// mismatch or n < 2, DegenerateInputError when either vector has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Z-scores with population standard deviation: output has mean 0 and
/// population stddev 1. Throws on n < 2 or zero variance.
std::vector<double> standardize(std::span<const double> x);

/// Forecast-accuracy summary. r_squared is absent when it is undefined
/// (fewer than 2 pairs, or constant actuals).
struct MetricsBundle {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    std::optional<double> r_squared;
    std::size_t n = 0;
};

/// MAE = mean |a-p|, MSE = mean (a-p)^2, RMSE = sqrt(MSE),
/// R^2 = 1 - SS_res/SS_tot with SS_tot about the mean of actual.
/// R^2 is not clamped and may be negative for worse-than-mean predictors.
MetricsBundle evaluate_forecasts(std::span<const double> actual,
                                 std::span<const double> predicted);

} // namespace pm25
