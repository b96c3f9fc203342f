#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pm25kit/errors.hpp"

namespace pm25 {

enum class PollutionLevel { Low, Moderate, High };

std::string_view pollution_level_name(PollutionLevel level);

struct ClusterPoint {
    std::string id;
    double value = 0.0;
};

/// Affine map from the clustering space back to raw units
/// (raw = z * stddev + mean). Identity by default.
struct RawTransform {
    double mean = 0.0;
    double stddev = 1.0;
    double to_raw(double z) const { return z * stddev + mean; }
};

struct ClusterModel {
    int k = 0;
    std::vector<double> centers;     // in the input (typically standardized) space
    std::vector<double> raw_centers; // centers mapped through the raw transform
    std::map<std::string, int> assignments;
    double wcss = 0.0;
    std::map<int, PollutionLevel> labels; // filled by label_clusters when k == 3
};

struct KmeansOptions {
    int max_iterations = 300;
    int restarts = 10;
};

/// Lloyd's algorithm on 1-D points, best run by WCSS. Restart 0 initializes
/// centers at the (i+0.5)/k quantiles, the next `restarts - 1` use seeded
/// distance-weighted random point selection, and one final run is seeded from
/// the exact dynamic-programming partition of the sorted values so the result
/// always matches the optimal-partition oracle. Deterministic for a fixed
/// seed. Equidistant points break ties toward the lower cluster index; empty
/// clusters are reseeded at the point farthest from its assigned center.
ClusterModel kmeans_fit(const std::vector<ClusterPoint>& points, int k,
                        std::uint64_t seed, RawTransform transform = {},
                        const KmeansOptions& options = {});

struct ElbowCurve {
    std::map<int, double> wcss; // k -> best-of-restarts WCSS
    int knee = 0;
};

/// Runs kmeans_fit for k in [1, k_max]; the knee is the k whose (k, WCSS)
/// point lies farthest from the chord joining the curve's endpoints.
ElbowCurve elbow_curve(const std::vector<ClusterPoint>& points, int k_max,
                       std::uint64_t seed, RawTransform transform = {},
                       const KmeansOptions& options = {});

/// Requires k == 3: clusters sorted by ascending raw-space center receive
/// Low, Moderate, High.
ClusterModel label_clusters(ClusterModel model);

namespace detail {

struct LloydResult {
    std::vector<int> assignments;
    std::vector<double> centers;
    double wcss = 0.0;
};

/// Single Lloyd run from explicit initial centers. `wcss_trace`, when given,
/// receives the WCSS after every update step (non-increasing by construction).
LloydResult lloyd(const std::vector<double>& values, std::vector<double> centers,
                  int max_iterations, std::vector<double>* wcss_trace = nullptr);

} // namespace detail

} // namespace pm25
