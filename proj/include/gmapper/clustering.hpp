#ifndef GMAPPER_CLUSTERING_HPP
#define GMAPPER_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "point_cloud.hpp"

namespace gmapper::clustering {

enum class Metric { Euclidean, Correlation };

constexpr std::string_view to_string(Metric m) {
    return m == Metric::Euclidean ? "euclidean" : "correlation";
}

inline constexpr std::int32_t kNoise = -1;

struct ClusterLabels {
    std::vector<std::int32_t> labels;  // cluster id in [0, n_clusters) or kNoise
    std::size_t n_clusters = 0;
};

inline double euclidean(std::span<const double> p, std::span<const double> q) {
    double ss = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double d = p[j] - q[j];
        ss += d * d;
    }
    return std::sqrt(ss);
}

// 1 - Pearson r between the coordinate sequences of p and q, in [0, 2].
// Not a metric (no triangle inequality), but DBSCAN only needs the
// neighborhood predicate.
inline double correlation_distance(std::span<const double> p, std::span<const double> q) {
    const std::size_t d = p.size();
    if (d < 2) throw Error(ErrorCode::ZeroVariancePoint, "correlation distance needs d >= 2");
    double mp = 0.0, mq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        mp += p[j];
        mq += q[j];
    }
    mp /= static_cast<double>(d);
    mq /= static_cast<double>(d);
    double spq = 0.0, spp = 0.0, sqq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double a = p[j] - mp;
        const double b = q[j] - mq;
        spq += a * b;
        spp += a * a;
        sqq += b * b;
    }
    if (!(spp > 0.0) || !(sqq > 0.0))
        throw Error(ErrorCode::ZeroVariancePoint, "point has constant coordinates");
    const double r = std::clamp(spq / std::sqrt(spp * sqq), -1.0, 1.0);
    return 1.0 - r;
}

inline double pairwise_distance(std::span<const double> p, std::span<const double> q, Metric metric) {
    if (p.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
    return metric == Metric::Euclidean ? euclidean(p, q) : correlation_distance(p, q);
}

namespace detail {

// Neighbor lists (positions into `subset`, self included) under d <= eps.
class NeighborIndex {
public:
    NeighborIndex(const PointCloud& cloud, std::span<const std::size_t> subset, double eps, Metric metric)
        : cloud_(cloud), subset_(subset), eps_(eps), metric_(metric) {
        if (metric_ != Metric::Euclidean || subset_.empty() || cloud_.dim() == 0) return;

        // Sweep along the axis of largest spread: |dx| > eps rules a pair out.
        std::size_t best_axis = 0;
        double best_spread = -1.0;
        for (std::size_t j = 0; j < cloud_.dim(); ++j) {
            double lo = cloud_.at(subset_[0], j), hi = lo;
            for (std::size_t idx : subset_) {
                lo = std::min(lo, cloud_.at(idx, j));
                hi = std::max(hi, cloud_.at(idx, j));
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                best_axis = j;
            }
        }
        axis_ = best_axis;
        order_.resize(subset_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        keys_.resize(subset_.size());
        for (std::size_t k = 0; k < subset_.size(); ++k) keys_[k] = cloud_.at(subset_[k], axis_);
        std::stable_sort(order_.begin(), order_.end(),
                         [this](std::size_t a, std::size_t b) { return keys_[a] < keys_[b]; });
        sorted_keys_.resize(order_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) sorted_keys_[k] = keys_[order_[k]];
        swept_ = true;
    }

    void query(std::size_t pos, std::vector<std::size_t>& out) const {
        out.clear();
        const auto p = cloud_.row(subset_[pos]);
        if (!swept_) {
            for (std::size_t k = 0; k < subset_.size(); ++k)
                if (pairwise_distance(p, cloud_.row(subset_[k]), metric_) <= eps_) out.push_back(k);
            return;
        }
        // widen the window slightly so rounding in the distance cannot drop a neighbor
        const double reach = eps_ * (1.0 + 1e-9) + 1e-300;
        const double key = keys_[pos];
        const auto first = std::lower_bound(sorted_keys_.begin(), sorted_keys_.end(), key - reach);
        const auto last = std::upper_bound(first, sorted_keys_.end(), key + reach);
        for (auto it = first; it != last; ++it) {
            const std::size_t k = order_[static_cast<std::size_t>(it - sorted_keys_.begin())];
            if (euclidean(p, cloud_.row(subset_[k])) <= eps_) out.push_back(k);
        }
    }

private:
    const PointCloud& cloud_;
    std::span<const std::size_t> subset_;
    double eps_;
    Metric metric_;
    bool swept_ = false;
    std::size_t axis_ = 0;
    std::vector<std::size_t> order_;
    std::vector<double> keys_;
    std::vector<double> sorted_keys_;
};

}  // namespace detail

/// DBSCAN over the points of `cloud` listed in `subset`. Labels are indexed
/// by position in `subset`. A point is core when at least `min_pts` points
/// (itself included) lie within distance `eps`. Points are scanned in order;
/// a border point joins the first cluster that reaches it.
inline ClusterLabels dbscan(const PointCloud& cloud, std::span<const std::size_t> subset, double eps,
                            std::size_t min_pts, Metric metric) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be > 0");
    if (min_pts < 1) throw Error(ErrorCode::InvalidArgument, "min_pts must be >= 1");

    constexpr std::int32_t kUnvisited = -2;
    ClusterLabels result;
    result.labels.assign(subset.size(), kUnvisited);

    if (metric == Metric::Correlation)
        for (std::size_t idx : subset) {
            const auto p = cloud.row(idx);
            correlation_distance(p, p);  // throws on a constant point
        }

    detail::NeighborIndex index(cloud, subset, eps, metric);
    std::vector<std::size_t> neighbors, more, queue;
    std::int32_t cluster = 0;

    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (result.labels[i] != kUnvisited) continue;
        index.query(i, neighbors);
        if (neighbors.size() < min_pts) {
            result.labels[i] = kNoise;
            continue;
        }
        result.labels[i] = cluster;
        queue.assign(neighbors.begin(), neighbors.end());
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t j = queue[head];
            if (result.labels[j] == kNoise) result.labels[j] = cluster;  // border point
            if (result.labels[j] != kUnvisited) continue;
            result.labels[j] = cluster;
            index.query(j, more);
            if (more.size() < min_pts) continue;
            for (std::size_t k : more)
                if (result.labels[k] == kUnvisited || result.labels[k] == kNoise) queue.push_back(k);
        }
        ++cluster;
    }
    result.n_clusters = static_cast<std::size_t>(cluster);
    return result;
}

inline ClusterLabels dbscan(const PointCloud& cloud, double eps, std::size_t min_pts, Metric metric) {
    std::vector<std::size_t> all(cloud.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return dbscan(cloud, all, eps, min_pts, metric);
}

}  // namespace gmapper::clustering

#endif  // GMAPPER_CLUSTERING_HPP
