#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pm25kit/errors.hpp"

namespace pm25 {

/// Model order for very short annual series: p, d, q each 0 or 1, plus an
/// optional drift (constant on the differenced scale).
struct ArimaOrder {
    int p = 0;
    int d = 1;
    int q = 0;
    bool drift = false;

    int free_params() const { return p + q + (drift ? 1 : 0); }

    /// Free parameters plus one must not exceed the effective sample size:
    /// p + q + drift + 1 <= n - d.
    bool fits_sample(std::size_t n) const;
    void validate(std::size_t n) const; // throws InsufficientDataError

    std::string str() const;                    // "(0,1,0)+drift"
    static ArimaOrder parse(std::string_view);  // "p,d,q" or "p,d,q,drift"

    bool operator==(const ArimaOrder&) const = default;
};

struct ArimaModel {
    ArimaOrder order;
    std::optional<double> phi;         // AR(1) coefficient, |phi| < 1
    std::optional<double> theta;       // MA(1) coefficient, |theta| < 1
    std::optional<double> drift_value; // mean of the d-times-differenced series
    std::vector<double> residuals;     // length n - d, pre-sample residuals = 0
    double css = 0.0;                  // conditional sum of squared residuals
    std::vector<double> train;         // training series, oldest first
};

/// d-th differences; d = 0 returns x, d = 1 returns first differences.
std::vector<double> difference(std::span<const double> x, int d);

/// Inverse of one differencing pass: cumulative sums anchored at x0.
std::vector<double> integrate(std::span<const double> diffs, double x0);

/// Conditional-sum-of-squares fit. AR(1) uses ordinary least squares of w_t on
/// w_{t-1} (clamped into (-0.99, 0.99)); MA and ARMA coefficients minimize CSS
/// over a 2001-point grid per coefficient in [-0.99, 0.99], refined by one
/// golden-section pass (tolerance 1e-6). Pre-sample values and residuals are 0.
ArimaModel fit(std::span<const double> series, ArimaOrder order);

/// Standard recursion on the differenced scale (future residuals = 0), drift
/// added per step, then d-fold integration from the last observed level.
std::vector<double> forecast(const ArimaModel& model, int horizon);

/// Small-sample-corrected AIC: n'*ln(css/n') + 2k*n'/(n'-k-1) with n' = n - d
/// and k = free-parameter count + 1. -inf when css is exactly 0, +inf when the
/// correction denominator is not positive.
double aicc(const ArimaModel& model);

/// Evaluates {(0,1,0), (0,1,0)+drift, (1,0,0), (1,1,0), (0,1,1)} filtered by
/// the free-parameter rule and returns the AICc minimizer. Ties prefer fewer
/// free parameters, then candidate-list order. If no candidate fits, falls
/// back to (0,1,0)+drift, then (0,1,0).
ArimaOrder select_order(std::span<const double> series);

} // namespace pm25
