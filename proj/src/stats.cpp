#include "pm25kit/stats.hpp"

#include <algorithm>
#include <cmath>

namespace pm25 {

double mean(std::span<const double> x) {
    if (x.empty()) throw ArgumentError("mean of empty vector");
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double stddev_pop(std::span<const double> x) {
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ArgumentError("pearson: length mismatch (" + std::to_string(x.size()) +
                            " vs " + std::to_string(y.size()) + ")");
    }
    if (x.size() < 2) throw ArgumentError("pearson: need at least 2 pairs");

    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateInputError("pearson: zero variance input");
    }
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

std::vector<double> standardize(std::span<const double> x) {
    if (x.size() < 2) throw ArgumentError("standardize: need at least 2 values");
    const double m = mean(x);
    const double sd = stddev_pop(x);
    if (sd == 0.0) throw DegenerateInputError("standardize: zero variance input");
    std::vector<double> z;
    z.reserve(x.size());
    for (double v : x) z.push_back((v - m) / sd);
    return z;
}

MetricsBundle evaluate_forecasts(std::span<const double> actual,
                                 std::span<const double> predicted) {
    if (actual.size() != predicted.size()) {
        throw ArgumentError("evaluate_forecasts: length mismatch");
    }
    if (actual.empty()) throw ArgumentError("evaluate_forecasts: empty input");

    MetricsBundle out;
    out.n = actual.size();
    double abs_sum = 0.0, sq_sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
    }
    const double n = static_cast<double>(actual.size());
    out.mae = abs_sum / n;
    out.mse = sq_sum / n;
    out.rmse = std::sqrt(out.mse);

    if (actual.size() >= 2) {
        const double ma = mean(actual);
        double ss_tot = 0.0;
        for (double a : actual) ss_tot += (a - ma) * (a - ma);
        if (ss_tot > 0.0) {
            out.r_squared = 1.0 - sq_sum / ss_tot;
        }
    }
    return out;
}

} // namespace pm25
