#include "pm25kit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace pm25 {

namespace {

std::vector<int> assign_points(const std::vector<double>& values,
                               const std::vector<double>& centers) {
    std::vector<int> assign(values.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = std::abs(values[i] - centers[c]);
            if (d < best) { // strict: ties stay with the lower index
                best = d;
                best_c = static_cast<int>(c);
            }
        }
        assign[i] = best_c;
    }
    return assign;
}

double compute_wcss(const std::vector<double>& values, const std::vector<int>& assign,
                    const std::vector<double>& centers) {
    double wcss = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - centers[assign[i]];
        wcss += d * d;
    }
    return wcss;
}

// Mean update; each empty cluster is reseeded at the point farthest from its
// assigned center (lowest point index on ties, distinct point per empty cluster).
// Returns true if a reseed happened.
bool update_centers(const std::vector<double>& values, const std::vector<int>& assign,
                    std::vector<double>& centers) {
    const std::size_t k = centers.size();
    std::vector<double> sums(k, 0.0);
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        sums[assign[i]] += values[i];
        counts[assign[i]] += 1;
    }
    bool repaired = false;
    std::vector<bool> used(values.size(), false);
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) {
            centers[c] = sums[c] / counts[c];
        } else {
            double far = -1.0;
            std::size_t far_idx = 0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (used[i]) continue;
                const double d = std::abs(values[i] - centers[assign[i]]);
                if (d > far) {
                    far = d;
                    far_idx = i;
                }
            }
            centers[c] = values[far_idx];
            used[far_idx] = true;
            repaired = true;
        }
    }
    return repaired;
}

// Exact 1-D solution by dynamic programming over the sorted values: optimal
// clusters are contiguous runs, so O(k n^2) with prefix sums. Used to seed one
// deterministic restart; Lloyd keeps an optimal partition, which makes
// best-of-restarts meet the exhaustive-search oracle instead of only usually
// finding it.
std::vector<double> dp_init(std::vector<double> values, int k) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + values[i];
        prefix_sq[i + 1] = prefix_sq[i] + values[i] * values[i];
    }
    auto segment_cost = [&](std::size_t first, std::size_t last) { // inclusive
        const double sum = prefix[last + 1] - prefix[first];
        const double sumsq = prefix_sq[last + 1] - prefix_sq[first];
        const double count = static_cast<double>(last - first + 1);
        return std::max(0.0, sumsq - sum * sum / count);
    };

    const double inf = std::numeric_limits<double>::infinity();
    // best[j][i]: cost of the first i points in j clusters; split[j][i]: start
    // index of the last cluster.
    std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> split(k + 1, std::vector<std::size_t>(n + 1, 0));
    best[0][0] = 0.0;
    for (int j = 1; j <= k; ++j) {
        for (std::size_t i = j; i <= n; ++i) {
            for (std::size_t m = j - 1; m < i; ++m) {
                const double cost = best[j - 1][m] + segment_cost(m, i - 1);
                if (cost < best[j][i]) {
                    best[j][i] = cost;
                    split[j][i] = m;
                }
            }
        }
    }

    std::vector<double> centers(k, 0.0);
    std::size_t end = n;
    for (int j = k; j >= 1; --j) {
        const std::size_t start = split[j][end];
        centers[j - 1] = (prefix[end] - prefix[start]) / static_cast<double>(end - start);
        end = start;
    }
    return centers;
}

// Centers at the (i+0.5)/k quantiles of the data, linear interpolation.
std::vector<double> quantile_init(std::vector<double> values, int k) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> centers;
    centers.reserve(k);
    for (int i = 0; i < k; ++i) {
        const double q = (i + 0.5) / k;
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = pos - static_cast<double>(lo);
        centers.push_back(values[lo] * (1.0 - frac) + values[hi] * frac);
    }
    return centers;
}

// Seeded random point selection, weighted by squared distance to the nearest
// already-chosen center so restarts cover distinct basins.
std::vector<double> random_init(const std::vector<double>& values, int k,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = values.size();
    auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

    std::vector<double> centers;
    centers.reserve(k);
    centers.push_back(values[rng() % n]);
    std::vector<double> d2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (double c : centers) {
                nearest = std::min(nearest, (values[i] - c) * (values[i] - c));
            }
            d2[i] = nearest;
            total += nearest;
        }
        if (total == 0.0) {
            centers.push_back(values[rng() % n]);
            continue;
        }
        const double r = unit() * total;
        double cumulative = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            cumulative += d2[i];
            if (cumulative >= r) {
                pick = i;
                break;
            }
        }
        centers.push_back(values[pick]);
    }
    std::sort(centers.begin(), centers.end());
    return centers;
}

} // namespace

namespace detail {

LloydResult lloyd(const std::vector<double>& values, std::vector<double> centers,
                  int max_iterations, std::vector<double>* wcss_trace) {
    std::vector<int> assign = assign_points(values, centers);
    for (int iter = 0; iter < max_iterations; ++iter) {
        const bool repaired = update_centers(values, assign, centers);
        std::vector<int> next = assign_points(values, centers);
        if (wcss_trace) wcss_trace->push_back(compute_wcss(values, next, centers));
        if (!repaired && next == assign) break;
        assign = std::move(next);
    }
    // Settle the fixed point: centers equal the means of their members.
    update_centers(values, assign, centers);
    LloydResult result;
    result.wcss = compute_wcss(values, assign, centers);
    result.assignments = std::move(assign);
    result.centers = std::move(centers);
    return result;
}

} // namespace detail

std::string_view pollution_level_name(PollutionLevel level) {
    switch (level) {
        case PollutionLevel::Low: return "Low Pollution";
        case PollutionLevel::Moderate: return "Moderate Pollution";
        case PollutionLevel::High: return "High Pollution";
    }
    return "Unknown";
}

ClusterModel kmeans_fit(const std::vector<ClusterPoint>& points, int k,
                        std::uint64_t seed, RawTransform transform,
                        const KmeansOptions& options) {
    if (points.empty()) throw ArgumentError("kmeans_fit: empty input");
    if (k < 1) throw ArgumentError("kmeans_fit: k must be >= 1");
    if (static_cast<std::size_t>(k) > points.size()) {
        throw ArgumentError("kmeans_fit: k (" + std::to_string(k) +
                            ") exceeds number of points (" + std::to_string(points.size()) + ")");
    }

    std::vector<double> values;
    values.reserve(points.size());
    for (const auto& p : points) values.push_back(p.value);

    detail::LloydResult best;
    bool have_best = false;
    for (int restart = 0; restart <= options.restarts; ++restart) {
        std::vector<double> init;
        if (restart == 0) {
            init = quantile_init(values, k);
        } else if (restart == options.restarts) {
            init = dp_init(values, k); // exact-seeded run, see dp_init
        } else {
            init = random_init(values, k, seed * 1000003ULL + static_cast<std::uint64_t>(restart));
        }
        auto run = detail::lloyd(values, std::move(init), options.max_iterations);
        if (!have_best || run.wcss < best.wcss) {
            best = std::move(run);
            have_best = true;
        }
    }

    ClusterModel model;
    model.k = k;
    model.centers = best.centers;
    model.raw_centers.reserve(best.centers.size());
    for (double c : best.centers) model.raw_centers.push_back(transform.to_raw(c));
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto [it, inserted] = model.assignments.emplace(points[i].id, best.assignments[i]);
        if (!inserted) throw ArgumentError("kmeans_fit: duplicate point id '" + points[i].id + "'");
        (void)it;
    }
    model.wcss = best.wcss;
    return model;
}

ElbowCurve elbow_curve(const std::vector<ClusterPoint>& points, int k_max,
                       std::uint64_t seed, RawTransform transform,
                       const KmeansOptions& options) {
    if (k_max < 2) throw ArgumentError("elbow_curve: k_max must be >= 2");
    if (static_cast<std::size_t>(k_max) > points.size()) {
        throw ArgumentError("elbow_curve: k_max exceeds number of points");
    }

    ElbowCurve curve;
    for (int k = 1; k <= k_max; ++k) {
        curve.wcss[k] = kmeans_fit(points, k, seed, transform, options).wcss;
    }

    // Knee: maximum perpendicular distance from (k, WCSS) to the chord joining
    // the endpoints (1, W1) and (k_max, Wmax).
    const double x1 = 1.0, y1 = curve.wcss.at(1);
    const double x2 = static_cast<double>(k_max), y2 = curve.wcss.at(k_max);
    const double norm = std::hypot(x2 - x1, y2 - y1);
    double best_dist = -1.0;
    int best_k = 1;
    for (const auto& [k, w] : curve.wcss) {
        const double dist = norm == 0.0
            ? 0.0
            : std::abs((y2 - y1) * k - (x2 - x1) * w + x2 * y1 - y2 * x1) / norm;
        if (dist > best_dist + 1e-12) {
            best_dist = dist;
            best_k = k;
        }
    }
    curve.knee = best_k;
    return curve;
}

ClusterModel label_clusters(ClusterModel model) {
    if (model.k != 3) {
        throw ArgumentError("label_clusters: requires k == 3, got k = " +
                            std::to_string(model.k));
    }
    std::vector<int> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return model.raw_centers[a] < model.raw_centers[b];
    });
    model.labels.clear();
    model.labels[order[0]] = PollutionLevel::Low;
    model.labels[order[1]] = PollutionLevel::Moderate;
    model.labels[order[2]] = PollutionLevel::High;
    return model;
}

} // namespace pm25
