#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "pm25kit/arima.hpp"

using namespace pm25;

TEST_CASE("difference and integrate") {
    CHECK(difference(std::vector<double>{1, 3, 6, 10}, 1) == std::vector<double>{2, 3, 4});
    CHECK(difference(std::vector<double>{5, 7}, 0) == std::vector<double>{5, 7});
    CHECK_THROWS_AS(difference(std::vector<double>{1}, 1), ArgumentError);

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x;
        for (int i = 0; i < 8; ++i) x.push_back(dist(rng));
        const auto diffs = difference(x, 1);
        const auto back = integrate(diffs, x[0]);
        REQUIRE(back.size() == x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("random walk fit matches hand-computed CSS") {
    const std::vector<double> series{10, 12, 11, 13, 15};
    const auto model = fit(series, {0, 1, 0, false});
    CHECK(model.css == doctest::Approx(13.0).epsilon(1e-12)); // 4 + 1 + 4 + 4
    CHECK(model.residuals == std::vector<double>{2, -1, 2, 2});
    CHECK_FALSE(model.phi.has_value());
    CHECK_FALSE(model.drift_value.has_value());

    const auto drift = fit(series, {0, 1, 0, true});
    REQUIRE(drift.drift_value.has_value());
    CHECK(*drift.drift_value == doctest::Approx(1.25).epsilon(1e-12));

    const std::vector<double> constant{7, 7, 7, 7, 7};
    CHECK(fit(constant, {0, 1, 0, false}).css == 0.0);
}

TEST_CASE("forecast recursions match hand computations") {
    // Random walk: forecast sticks at the last observation.
    const auto rw = fit(std::vector<double>{10, 12, 11, 13, 15}, {0, 1, 0, false});
    CHECK(forecast(rw, 1) == std::vector<double>{15});
    const auto rw3 = forecast(rw, 3);
    CHECK(rw3 == std::vector<double>{15, 15, 15});

    // Drift: last + k * drift.
    ArimaModel drifted = fit(std::vector<double>{10, 12, 11, 13, 15}, {0, 1, 0, true});
    drifted.drift_value = 1.25;
    const auto fc = forecast(drifted, 2);
    CHECK(fc[0] == doctest::Approx(16.25).epsilon(1e-12));
    CHECK(fc[1] == doctest::Approx(17.5).epsilon(1e-12));

    // AR(1) on a zero-mean series: phi^k times the last value.
    ArimaModel ar;
    ar.order = {1, 0, 0, false};
    ar.phi = 0.5;
    ar.train = {1.0, -2.0, 4.0};
    ar.residuals = {0.0, 0.0, 0.0};
    const auto ar_fc = forecast(ar, 3);
    CHECK(ar_fc[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ar_fc[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ar_fc[2] == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(forecast(ar, 0), ArgumentError);
}

TEST_CASE("AR(1) OLS matches the closed form") {
    std::mt19937 rng(77);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> z{noise(rng)};
        for (int i = 1; i < 12; ++i) z.push_back(0.6 * z.back() + noise(rng));
        const auto model = fit(z, {1, 0, 0, false});
        double num = 0.0, den = 0.0;
        for (std::size_t t = 1; t < z.size(); ++t) {
            num += z[t] * z[t - 1];
            den += z[t - 1] * z[t - 1];
        }
        REQUIRE(model.phi.has_value());
        const double closed = num / den;
        if (std::abs(closed) < 0.99) {
            CHECK(*model.phi == doctest::Approx(closed).epsilon(1e-9));
        } else {
            CHECK(std::abs(*model.phi) == doctest::Approx(0.99));
        }
        CHECK(std::abs(*model.phi) < 1.0);
    }
}

TEST_CASE("MA coefficient is the grid CSS minimizer") {
    std::mt19937 rng(13);
    std::normal_distribution<double> noise(0.0, 2.0);
    std::vector<double> series;
    double prev_e = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double e = noise(rng);
        series.push_back(20.0 + e + 0.4 * prev_e);
        prev_e = e;
    }
    const auto model = fit(series, {0, 1, 1, false});
    REQUIRE(model.theta.has_value());
    CHECK(std::abs(*model.theta) < 1.0);

    // Re-scan: no grid point beats the returned coefficient.
    const auto z = difference(series, 1);
    auto css_at = [&](double theta) {
        double css = 0.0, prev = 0.0;
        for (double zt : z) {
            const double e = zt - theta * prev;
            css += e * e;
            prev = e;
        }
        return css;
    };
    const double best = css_at(*model.theta);
    for (int i = 0; i <= 2000; ++i) {
        const double theta = -0.99 + i * (1.98 / 2000.0);
        CHECK(best <= css_at(theta) + 1e-9);
    }
    CHECK(model.css == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("ARMA(1,1) joint grid never loses to its nested models") {
    std::mt19937 rng(303);
    std::normal_distribution<double> noise(0.0, 1.5);
    std::vector<double> series;
    double prev = 0.0, prev_e = 0.0;
    for (int i = 0; i < 12; ++i) {
        const double e = noise(rng);
        prev = 0.5 * prev + e + 0.3 * prev_e;
        prev_e = e;
        series.push_back(prev);
    }
    const auto arma = fit(series, {1, 0, 1, false});
    REQUIRE(arma.phi.has_value());
    REQUIRE(arma.theta.has_value());
    CHECK(std::abs(*arma.phi) < 1.0);
    CHECK(std::abs(*arma.theta) < 1.0);
    // The joint CSS search dominates both one-parameter specializations.
    CHECK(arma.css <= fit(series, {1, 0, 0, false}).css + 1e-6);
    CHECK(arma.css <= fit(series, {0, 0, 1, false}).css + 1e-6);
}

TEST_CASE("AR(1) with drift centers on the series mean") {
    const std::vector<double> series{50.2, 49.1, 51.3, 50.8, 49.6, 50.0};
    const auto model = fit(series, {1, 0, 0, true});
    REQUIRE(model.drift_value.has_value());
    double sum = 0.0;
    for (double v : series) sum += v;
    CHECK(*model.drift_value == doctest::Approx(sum / series.size()).epsilon(1e-12));
    // One step ahead: mu + phi * (last - mu).
    const double mu = *model.drift_value;
    const double expected = mu + *model.phi * (series.back() - mu);
    CHECK(forecast(model, 1)[0] == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("level shifts do not change integrated-model residuals") {
    const std::vector<double> series{14.2, 18.9, 16.4, 20.0, 23.5, 21.8};
    for (ArimaOrder order : {ArimaOrder{0, 1, 0, false}, ArimaOrder{0, 1, 1, false},
                             ArimaOrder{1, 1, 0, false}}) {
        const auto base = fit(series, order);
        std::vector<double> shifted = series;
        for (double& v : shifted) v += 100.0;
        const auto moved = fit(shifted, order);
        REQUIRE(base.residuals.size() == moved.residuals.size());
        for (std::size_t i = 0; i < base.residuals.size(); ++i) {
            CHECK(moved.residuals[i] == doctest::Approx(base.residuals[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("integrated forecasts equal integrated ARMA forecasts") {
    const std::vector<double> series{30.0, 28.5, 33.0, 31.2, 36.8, 35.1};
    for (ArimaOrder order : {ArimaOrder{1, 1, 0, false}, ArimaOrder{0, 1, 1, false},
                             ArimaOrder{0, 1, 0, true}}) {
        const auto integrated = fit(series, order);
        const auto w = difference(series, 1);
        const ArimaOrder flat{order.p, 0, order.q, order.drift};
        const auto arma = fit(w, flat);
        const auto w_fc = forecast(arma, 4);
        const auto direct = forecast(integrated, 4);
        double level = series.back();
        for (int h = 0; h < 4; ++h) {
            level += w_fc[h];
            CHECK(direct[h] == doctest::Approx(level).epsilon(1e-9));
        }
    }
}

TEST_CASE("degenerate and contract errors") {
    // Constant differenced series cannot identify AR/MA terms.
    CHECK_THROWS_AS(fit(std::vector<double>{5, 6, 7, 8, 9}, {1, 1, 0, false}),
                    DegenerateFitError);
    CHECK_THROWS_AS(fit(std::vector<double>{3, 3, 3, 3}, {1, 0, 0, false}), DegenerateFitError);

    // Free-parameter rule: p + q + drift + 1 <= n - d.
    CHECK_THROWS_AS(fit(std::vector<double>{1, 2}, {1, 1, 0, false}), InsufficientDataError);
    CHECK_THROWS_AS(fit(std::vector<double>{1, 2, 3}, {1, 1, 1, false}), InsufficientDataError);

    CHECK_THROWS_AS(ArimaOrder::parse("2,1,0"), ArgumentError);
    CHECK_THROWS_AS(ArimaOrder::parse("nonsense"), ArgumentError);
    CHECK(ArimaOrder::parse("0,1,0,drift") == ArimaOrder{0, 1, 0, true});
    CHECK(ArimaOrder::parse("1,0,0").str() == "(1,0,0)");
}

TEST_CASE("order selection prefers drift for a linear ramp") {
    // Exact random walk with constant positive drift: css = 0 for the drift
    // candidate, so its AICc is -inf and it wins.
    const std::vector<double> ramp{10, 11, 12, 13, 14};
    CHECK(select_order(ramp) == ArimaOrder{0, 1, 0, true});

    const auto model = fit(ramp, {0, 1, 0, true});
    CHECK(model.css == doctest::Approx(0.0).epsilon(1e-12));
    const auto fc = forecast(model, 2);
    CHECK(fc[0] == doctest::Approx(15.0).epsilon(1e-9));
    CHECK(fc[1] == doctest::Approx(16.0).epsilon(1e-9));
}

TEST_CASE("order selection falls back to the plain random walk") {
    // Constant series: every AR/MA candidate is degenerate and the css = 0 tie
    // between (0,1,0) and (0,1,0)+drift resolves to fewer parameters.
    CHECK(select_order(std::vector<double>{9, 9, 9, 9, 9}) == ArimaOrder{0, 1, 0, false});
}

TEST_CASE("order selection contract") {
    CHECK_THROWS_AS(select_order(std::vector<double>{1, 2, 3}), InsufficientDataError);

    // Selected order must always be fittable on the same series.
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> dist(5.0, 80.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> series;
        const int n = 4 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) series.push_back(dist(rng));
        const auto order = select_order(series);
        const auto model = fit(series, order);
        CHECK(model.train.size() == series.size());
        if (model.phi) CHECK(std::abs(*model.phi) < 1.0);
        if (model.theta) CHECK(std::abs(*model.theta) < 1.0);
        CHECK(model.residuals.size() == series.size() - static_cast<std::size_t>(order.d));
    }
}
