#include "pm25kit/arima.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace pm25 {

namespace {

constexpr double kCoefBound = 0.99;
constexpr int kGridPoints = 2001;
constexpr double kGoldenTol = 1e-6;

// CSS of an ARMA(p<=1, q<=1) recursion on the centered differenced series,
// with pre-sample values and residuals fixed at 0.
double css_for(const std::vector<double>& z, double phi, double theta) {
    double css = 0.0;
    double prev_z = 0.0;
    double prev_e = 0.0;
    for (double zt : z) {
        const double e = zt - phi * prev_z - theta * prev_e;
        css += e * e;
        prev_z = zt;
        prev_e = e;
    }
    return css;
}

std::vector<double> residuals_for(const std::vector<double>& z, double phi, double theta) {
    std::vector<double> res;
    res.reserve(z.size());
    double prev_z = 0.0;
    double prev_e = 0.0;
    for (double zt : z) {
        const double e = zt - phi * prev_z - theta * prev_e;
        res.push_back(e);
        prev_z = zt;
        prev_e = e;
    }
    return res;
}

bool is_constant(const std::vector<double>& z) {
    for (double v : z) {
        if (v != z.front()) return false;
    }
    return true;
}

// Golden-section minimization of f over [lo, hi] down to kGoldenTol.
template <typename F>
double golden_section(F f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > kGoldenTol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

// Grid scan over [-kCoefBound, kCoefBound] followed by one golden-section pass
// around the best grid point.
template <typename F>
double grid_minimize(F f) {
    const double step = 2.0 * kCoefBound / (kGridPoints - 1);
    double best_x = -kCoefBound;
    double best_f = f(best_x);
    for (int i = 1; i < kGridPoints; ++i) {
        const double x = -kCoefBound + i * step;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    const double lo = std::max(-kCoefBound, best_x - step);
    const double hi = std::min(kCoefBound, best_x + step);
    const double refined = golden_section(f, lo, hi);
    return f(refined) < best_f ? refined : best_x;
}

double ols_ar1(const std::vector<double>& z) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < z.size(); ++t) {
        num += z[t] * z[t - 1];
        den += z[t - 1] * z[t - 1];
    }
    if (den == 0.0) return 0.0;
    return std::clamp(num / den, -kCoefBound, kCoefBound);
}

} // namespace

bool ArimaOrder::fits_sample(std::size_t n) const {
    return static_cast<std::size_t>(free_params() + 1) + static_cast<std::size_t>(d) <= n;
}

void ArimaOrder::validate(std::size_t n) const {
    if (p < 0 || p > 1 || d < 0 || d > 1 || q < 0 || q > 1) {
        throw ArgumentError("order components must each be 0 or 1: " + str());
    }
    if (!fits_sample(n)) {
        throw InsufficientDataError("order " + str() + " needs more than " +
                                    std::to_string(n) + " observations");
    }
}

std::string ArimaOrder::str() const {
    std::ostringstream out;
    out << "(" << p << "," << d << "," << q << ")";
    if (drift) out << "+drift";
    return out.str();
}

ArimaOrder ArimaOrder::parse(std::string_view text) {
    std::string s(text);
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    ArimaOrder order;
    std::string tail;
    if (!(in >> order.p >> order.d >> order.q)) {
        throw ArgumentError("order must be p,d,q or p,d,q,drift: '" + std::string(text) + "'");
    }
    if (in >> tail) {
        if (tail != "drift") {
            throw ArgumentError("unknown order suffix '" + tail + "' (expected 'drift')");
        }
        order.drift = true;
    }
    if (order.p < 0 || order.p > 1 || order.d < 0 || order.d > 1 || order.q < 0 ||
        order.q > 1) {
        throw ArgumentError("order components must each be 0 or 1: '" + std::string(text) + "'");
    }
    return order;
}

std::vector<double> difference(std::span<const double> x, int d) {
    if (d < 0 || d > 1) throw ArgumentError("difference: d must be 0 or 1");
    if (x.size() < static_cast<std::size_t>(d + 1)) {
        throw ArgumentError("difference: series too short");
    }
    if (d == 0) return {x.begin(), x.end()};
    std::vector<double> out;
    out.reserve(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) out.push_back(x[i] - x[i - 1]);
    return out;
}

std::vector<double> integrate(std::span<const double> diffs, double x0) {
    std::vector<double> out;
    out.reserve(diffs.size() + 1);
    out.push_back(x0);
    for (double d : diffs) out.push_back(out.back() + d);
    return out;
}

ArimaModel fit(std::span<const double> series, ArimaOrder order) {
    for (double v : series) {
        if (!std::isfinite(v)) throw ArgumentError("fit: series contains non-finite values");
    }
    order.validate(series.size());

    ArimaModel model;
    model.order = order;
    model.train.assign(series.begin(), series.end());

    std::vector<double> w = difference(series, order.d);
    double mu = 0.0;
    if (order.drift) {
        for (double v : w) mu += v;
        mu /= static_cast<double>(w.size());
        model.drift_value = mu;
    }
    std::vector<double> z = w;
    for (double& v : z) v -= mu;

    if (order.p + order.q >= 1 && is_constant(z)) {
        throw DegenerateFitError("constant differenced series cannot identify AR/MA terms");
    }

    double phi = 0.0, theta = 0.0;
    if (order.p == 1 && order.q == 0) {
        phi = ols_ar1(z);
    } else if (order.p == 0 && order.q == 1) {
        theta = grid_minimize([&](double t) { return css_for(z, 0.0, t); });
    } else if (order.p == 1 && order.q == 1) {
        // Joint grid over both coefficients, then one golden pass per coordinate.
        const double step = 2.0 * kCoefBound / (kGridPoints - 1);
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kGridPoints; ++i) {
            const double ph = -kCoefBound + i * step;
            for (int j = 0; j < kGridPoints; ++j) {
                const double th = -kCoefBound + j * step;
                const double c = css_for(z, ph, th);
                if (c < best) {
                    best = c;
                    phi = ph;
                    theta = th;
                }
            }
        }
        phi = golden_section(
            [&](double ph) { return css_for(z, ph, theta); },
            std::max(-kCoefBound, phi - step), std::min(kCoefBound, phi + step));
        theta = golden_section(
            [&](double th) { return css_for(z, phi, th); },
            std::max(-kCoefBound, theta - step), std::min(kCoefBound, theta + step));
    }

    if (order.p == 1) model.phi = phi;
    if (order.q == 1) model.theta = theta;
    model.residuals = residuals_for(z, phi, theta);
    model.css = 0.0;
    for (double e : model.residuals) model.css += e * e;
    return model;
}

std::vector<double> forecast(const ArimaModel& model, int horizon) {
    if (horizon < 1) throw ArgumentError("forecast: horizon must be >= 1");
    if (model.train.size() < static_cast<std::size_t>(model.order.d + 1)) {
        throw ArgumentError("forecast: model has no training data");
    }

    const double mu = model.drift_value.value_or(0.0);
    const double phi = model.phi.value_or(0.0);
    const double theta = model.theta.value_or(0.0);

    const std::vector<double> w = difference(model.train, model.order.d);
    const double z_last = (w.empty() ? 0.0 : w.back()) - mu;
    const double e_last = model.residuals.empty() ? 0.0 : model.residuals.back();

    // ARMA recursion on the centered differenced scale; future residuals are 0.
    std::vector<double> w_hat;
    w_hat.reserve(horizon);
    double prev_z = z_last;
    for (int h = 1; h <= horizon; ++h) {
        const double z_hat = phi * prev_z + (h == 1 ? theta * e_last : 0.0);
        w_hat.push_back(z_hat + mu);
        prev_z = z_hat;
    }

    if (model.order.d == 0) return w_hat;
    std::vector<double> out;
    out.reserve(horizon);
    double level = model.train.back();
    for (double step : w_hat) {
        level += step;
        out.push_back(level);
    }
    return out;
}

double aicc(const ArimaModel& model) {
    const double n_eff = static_cast<double>(model.train.size() - model.order.d);
    const double k = static_cast<double>(model.order.free_params() + 1);
    if (n_eff - k - 1.0 <= 0.0) return std::numeric_limits<double>::infinity();
    if (model.css <= 0.0) return -std::numeric_limits<double>::infinity();
    return n_eff * std::log(model.css / n_eff) + 2.0 * k * n_eff / (n_eff - k - 1.0);
}

ArimaOrder select_order(std::span<const double> series) {
    if (series.size() < 4) {
        throw InsufficientDataError("select_order: need at least 4 observations, got " +
                                    std::to_string(series.size()));
    }

    static const std::array<ArimaOrder, 5> candidates = {{
        {0, 1, 0, false},
        {0, 1, 0, true},
        {1, 0, 0, false},
        {1, 1, 0, false},
        {0, 1, 1, false},
    }};

    bool have_best = false;
    ArimaOrder best_order;
    double best_aicc = 0.0;
    int best_k = 0;
    std::size_t best_index = 0;

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const ArimaOrder& cand = candidates[i];
        if (!cand.fits_sample(series.size())) continue;
        double a;
        try {
            a = aicc(fit(series, cand));
        } catch (const DegenerateFitError&) {
            continue;
        }
        if (std::isinf(a) && a > 0.0) continue;
        const int k = cand.free_params();
        // Ties (including css == 0 on several candidates) prefer fewer free
        // parameters, then earlier candidates.
        const bool better = !have_best || a < best_aicc ||
                            (a == best_aicc && (k < best_k || (k == best_k && i < best_index)));
        if (better) {
            have_best = true;
            best_order = cand;
            best_aicc = a;
            best_k = k;
            best_index = i;
        }
    }
    if (have_best) return best_order;

    for (ArimaOrder fallback : {ArimaOrder{0, 1, 0, true}, ArimaOrder{0, 1, 0, false}}) {
        if (!fallback.fits_sample(series.size())) continue;
        try {
            fit(series, fallback);
            return fallback;
        } catch (const Error&) {
            continue;
        }
    }
    throw DegenerateFitError("select_order: no candidate order can be fitted");
}

} // namespace pm25
