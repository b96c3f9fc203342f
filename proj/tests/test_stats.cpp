#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "pm25kit/stats.hpp"

using namespace pm25;

namespace {

// Independent direct-formula oracle, kept free of the library implementation.
struct OracleMetrics {
    double mae, mse, rmse, r2;
};

OracleMetrics oracle_metrics(const std::vector<double>& a, const std::vector<double>& p) {
    const double n = static_cast<double>(a.size());
    double abs_sum = 0.0, sq_sum = 0.0, a_sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        abs_sum += std::fabs(a[i] - p[i]);
        sq_sum += (a[i] - p[i]) * (a[i] - p[i]);
        a_sum += a[i];
    }
    const double a_mean = a_sum / n;
    double ss_tot = 0.0;
    for (double v : a) ss_tot += (v - a_mean) * (v - a_mean);
    return {abs_sum / n, sq_sum / n, std::sqrt(sq_sum / n), 1.0 - sq_sum / ss_tot};
}

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    return (cov / n) / (std::sqrt(vx / n) * std::sqrt(vy / n));
}

} // namespace

TEST_CASE("pearson perfect linear relationships") {
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) ==
          doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson matches the covariance formula oracle") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{1.1, 1.9, 3.2, 3.8};
    CHECK(pearson(x, y) == doctest::Approx(oracle_pearson(x, y)).epsilon(1e-9));

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> a, b;
        const int n = 3 + static_cast<int>(rng() % 10);
        for (int i = 0; i < n; ++i) {
            a.push_back(dist(rng));
            b.push_back(dist(rng));
        }
        CHECK(pearson(a, b) == doctest::Approx(oracle_pearson(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("pearson is symmetric and affine invariant") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 100.0);
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
        x.push_back(dist(rng));
        y.push_back(dist(rng));
    }
    const double r = pearson(x, y);
    CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-12));

    std::vector<double> scaled = x;
    for (double& v : scaled) v = 3.5 * v + 11.0;
    CHECK(pearson(scaled, y) == doctest::Approx(r).epsilon(1e-9));

    // pearson(x, a*x + b) is exactly +-1 depending on the sign of a.
    std::vector<double> up = x, down = x;
    for (double& v : up) v = 2.0 * v + 1.0;
    for (double& v : down) v = -0.5 * v + 4.0;
    CHECK(pearson(x, up) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(x, down) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson error paths") {
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
                    ArgumentError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{2}), ArgumentError);
    CHECK_THROWS_AS(pearson(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}),
                    DegenerateInputError);
}

TEST_CASE("standardize hand-computed examples") {
    const auto z = standardize(std::vector<double>{1, 2, 3});
    const double expected = 1.0 / std::sqrt(2.0 / 3.0); // sigma = sqrt(2/3)
    CHECK(z[0] == doctest::Approx(-expected).epsilon(1e-9));
    CHECK(z[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z[2] == doctest::Approx(expected).epsilon(1e-9));

    const auto z2 = standardize(std::vector<double>{5, 5, 7, 7});
    CHECK(z2 == std::vector<double>{-1, -1, 1, 1});

    CHECK_THROWS_AS(standardize(std::vector<double>{4, 4, 4}), DegenerateInputError);
}

TEST_CASE("standardize output has mean 0 and population stddev 1") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-10.0, 90.0);
    std::vector<double> x;
    for (int i = 0; i < 40; ++i) x.push_back(dist(rng));
    const auto z = standardize(x);
    CHECK(mean(z) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(stddev_pop(z) == doctest::Approx(1.0).epsilon(1e-9));

    // Standardizing first must not change the correlation.
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) y.push_back(dist(rng));
    CHECK(pearson(standardize(x), y) == doctest::Approx(pearson(x, y)).epsilon(1e-9));
}

TEST_CASE("evaluate_forecasts identity and hand-computed cases") {
    const auto same = evaluate_forecasts(std::vector<double>{4, 7, 9},
                                         std::vector<double>{4, 7, 9});
    CHECK(same.mae == 0.0);
    CHECK(same.mse == 0.0);
    CHECK(same.rmse == 0.0);
    REQUIRE(same.r_squared.has_value());
    CHECK(*same.r_squared == 1.0);

    const auto m = evaluate_forecasts(std::vector<double>{3, 5}, std::vector<double>{1, 2});
    CHECK(m.mae == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(m.mse == doctest::Approx(6.5).epsilon(1e-12));
    CHECK(m.rmse == doctest::Approx(std::sqrt(6.5)).epsilon(1e-12));
    REQUIRE(m.r_squared.has_value());
    CHECK(*m.r_squared == doctest::Approx(-5.5).epsilon(1e-12)); // SS_tot = 2
}

TEST_CASE("evaluate_forecasts matches the oracle on random vectors") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(0.0, 120.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 15);
        std::vector<double> a, p;
        for (int i = 0; i < n; ++i) {
            a.push_back(dist(rng));
            p.push_back(dist(rng));
        }
        const auto got = evaluate_forecasts(a, p);
        const auto want = oracle_metrics(a, p);
        CHECK(got.mae == doctest::Approx(want.mae).epsilon(1e-9));
        CHECK(got.mse == doctest::Approx(want.mse).epsilon(1e-9));
        CHECK(got.rmse == doctest::Approx(want.rmse).epsilon(1e-9));
        REQUIRE(got.r_squared.has_value());
        CHECK(*got.r_squared == doctest::Approx(want.r2).epsilon(1e-9));

        // Bundle invariants.
        CHECK(got.mae <= got.rmse + 1e-12);
        CHECK(got.rmse * got.rmse == doctest::Approx(got.mse).epsilon(1e-9));
        CHECK(*got.r_squared <= 1.0);
    }
}

TEST_CASE("evaluate_forecasts degenerate R2 cases") {
    // Constant actuals: MAE/MSE/RMSE computed, R2 undefined.
    const auto m = evaluate_forecasts(std::vector<double>{5, 5, 5}, std::vector<double>{4, 5, 6});
    CHECK(m.mae == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_FALSE(m.r_squared.has_value());

    // Single pair: error metrics fine, R2 undefined.
    const auto single = evaluate_forecasts(std::vector<double>{10}, std::vector<double>{8});
    CHECK(single.mae == 2.0);
    CHECK(single.n == 1);
    CHECK_FALSE(single.r_squared.has_value());

    CHECK_THROWS_AS(evaluate_forecasts(std::vector<double>{1}, std::vector<double>{}),
                    ArgumentError);
    CHECK_THROWS_AS(evaluate_forecasts(std::vector<double>{}, std::vector<double>{}),
                    ArgumentError);
}
