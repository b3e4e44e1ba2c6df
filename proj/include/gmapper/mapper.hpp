#ifndef GMAPPER_MAPPER_HPP
#define GMAPPER_MAPPER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "clustering.hpp"
#include "cover.hpp"
#include "error.hpp"
#include "point_cloud.hpp"

namespace gmapper {

namespace lens {

struct Coordinate {
    std::size_t index = 0;
};
struct CoordSum {};
struct L2Norm {};
struct Pca1 {};
struct CsvColumn {
    std::string name;
};

using LensKind = std::variant<Coordinate, CoordSum, L2Norm, Pca1, CsvColumn>;

enum class Normalization { MinMax, None };

inline std::string describe(const LensKind& kind) {
    struct {
        std::string operator()(const Coordinate& c) const { return "coord:" + std::to_string(c.index); }
        std::string operator()(const CoordSum&) const { return "coord_sum"; }
        std::string operator()(const L2Norm&) const { return "l2_norm"; }
        std::string operator()(const Pca1&) const { return "pca1"; }
        std::string operator()(const CsvColumn& c) const { return "column:" + c.name; }
    } visitor;
    return std::visit(visitor, kind);
}

/// Parses "coord:J", "xJ", "coord_sum", "l2_norm", "pca1" or "column:NAME".
inline LensKind parse(std::string_view text) {
    auto index_from = [&](std::string_view digits) -> std::size_t {
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw Error(ErrorCode::InvalidArgument, "bad coordinate index in lens '" + std::string(text) + "'");
        return static_cast<std::size_t>(std::stoul(std::string(digits)));
    };
    if (text == "coord_sum") return CoordSum{};
    if (text == "l2_norm") return L2Norm{};
    if (text == "pca1") return Pca1{};
    if (text.starts_with("coord:")) return Coordinate{index_from(text.substr(6))};
    if (text.starts_with("column:") && text.size() > 7) return CsvColumn{std::string(text.substr(7))};
    if (text.size() > 1 && text[0] == 'x') return Coordinate{index_from(text.substr(1))};
    throw Error(ErrorCode::InvalidArgument, "unknown lens '" + std::string(text) + "'");
}

inline std::string_view to_string(Normalization n) { return n == Normalization::MinMax ? "minmax" : "none"; }

}  // namespace lens

struct LensVector {
    std::vector<double> values;
    lens::LensKind kind = lens::Coordinate{0};
    lens::Normalization normalization = lens::Normalization::MinMax;
};

namespace detail {

// Scores on the leading eigenvector of the sample covariance; the sign is
// fixed so the first nonzero loading is positive.
inline std::vector<double> first_principal_component(const PointCloud& cloud) {
    const auto n = static_cast<Eigen::Index>(cloud.size());
    const auto d = static_cast<Eigen::Index>(cloud.dim());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
        cloud.data().data(), n, d);
    const Eigen::RowVectorXd mu = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mu;
    const Eigen::MatrixXd cov = (centered.adjoint() * centered) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::Degenerate, "covariance eigensolve failed");
    Eigen::VectorXd axis = solver.eigenvectors().col(d - 1);
    for (Eigen::Index j = 0; j < d; ++j) {
        if (axis[j] != 0.0) {
            if (axis[j] < 0.0) axis = -axis;
            break;
        }
    }
    const Eigen::VectorXd scores = centered * axis;
    return {scores.data(), scores.data() + scores.size()};
}

}  // namespace detail

/// Evaluates a lens on every point, optionally min-max normalized to [0, 1].
inline LensVector apply_lens(const PointCloud& cloud, const lens::LensKind& kind, lens::Normalization normalization) {
    if (cloud.dim() < 1) throw Error(ErrorCode::DimensionMismatch, "lens needs d >= 1");
    const std::size_t n = cloud.size();

    LensVector out;
    out.kind = kind;
    out.normalization = normalization;
    out.values.resize(n);

    if (const auto* c = std::get_if<lens::Coordinate>(&kind)) {
        if (c->index >= cloud.dim()) throw Error(ErrorCode::DimensionMismatch, "lens coordinate out of range");
        for (std::size_t i = 0; i < n; ++i) out.values[i] = cloud.at(i, c->index);
    } else if (const auto* col = std::get_if<lens::CsvColumn>(&kind)) {
        const auto& names = cloud.column_names();
        const auto it = std::find(names.begin(), names.end(), col->name);
        if (it == names.end()) throw Error(ErrorCode::SpecInvalid, "no column named '" + col->name + "'");
        const auto j = static_cast<std::size_t>(it - names.begin());
        for (std::size_t i = 0; i < n; ++i) out.values[i] = cloud.at(i, j);
    } else if (std::holds_alternative<lens::CoordSum>(kind)) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = cloud.row(i);
            out.values[i] = std::accumulate(p.begin(), p.end(), 0.0);
        }
    } else if (std::holds_alternative<lens::L2Norm>(kind)) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = cloud.row(i);
            out.values[i] = std::sqrt(std::inner_product(p.begin(), p.end(), p.begin(), 0.0));
        }
    } else {
        if (n < 2) throw Error(ErrorCode::TooFewPoints, "pca1 lens needs at least 2 points");
        out.values = detail::first_principal_component(cloud);
    }

    if (normalization == lens::Normalization::MinMax && n > 0) {
        const auto [lo_it, hi_it] = std::minmax_element(out.values.begin(), out.values.end());
        const double lo = *lo_it, hi = *hi_it;
        if (!(hi > lo)) throw Error(ErrorCode::DegenerateNormalization, "lens is constant; cannot min-max normalize");
        for (double& v : out.values) v = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    }
    return out;
}

/// Indices of points whose lens value lies in the closed interval.
inline std::vector<std::size_t> preimage(std::span<const double> lens, const cover::Interval& iv) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < lens.size(); ++i)
        if (iv.contains(lens[i])) out.push_back(i);
    return out;
}

enum class NoisePolicy { Drop, Singletons };

inline std::string_view to_string(NoisePolicy p) { return p == NoisePolicy::Drop ? "drop" : "singletons"; }

struct MapperNode {
    std::size_t id = 0;
    std::size_t interval_index = 0;
    std::vector<std::size_t> members;  // sorted point indices
    double mean_lens = 0.0;
    std::map<std::string, std::size_t> label_histogram;
};

struct MapperEdge {
    std::size_t a = 0;  // a < b
    std::size_t b = 0;
    std::size_t shared = 0;

    friend bool operator==(const MapperEdge&, const MapperEdge&) = default;
};

struct MapperGraph {
    std::vector<MapperNode> nodes;
    std::vector<MapperEdge> edges;  // sorted by (a, b)
    std::map<std::string, std::string> provenance;
};

struct ClusterParams {
    double eps = 0.1;
    std::size_t min_pts = 5;
    clustering::Metric metric = clustering::Metric::Euclidean;
    NoisePolicy noise = NoisePolicy::Drop;
};

/// Edges of the nerve 1-skeleton: one per pair of nodes with intersecting
/// member sets, weighted by the intersection size.
inline std::vector<MapperEdge> nerve_edges(const std::vector<MapperNode>& nodes, std::size_t n_points) {
    std::vector<std::vector<std::size_t>> containing(n_points);
    for (const auto& node : nodes)
        for (std::size_t m : node.members) containing[m].push_back(node.id);

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> shared;
    for (const auto& ids : containing)
        for (std::size_t x = 0; x < ids.size(); ++x)
            for (std::size_t y = x + 1; y < ids.size(); ++y)
                ++shared[{std::min(ids[x], ids[y]), std::max(ids[x], ids[y])}];

    std::vector<MapperEdge> edges;
    edges.reserve(shared.size());
    for (const auto& [key, count] : shared) edges.push_back({key.first, key.second, count});
    return edges;
}

/// Clusters the preimage of every cover element in the ambient space and
/// joins clusters that share points.
inline MapperGraph build_mapper(const PointCloud& cloud, const LensVector& lens, const cover::IntervalCover& cover,
                                const ClusterParams& params) {
    if (cover.intervals.empty()) throw Error(ErrorCode::EmptyCover, "cover has no intervals");
    if (lens.values.size() != cloud.size())
        throw Error(ErrorCode::DimensionMismatch, "lens length differs from point count");

    MapperGraph g;
    const auto& labels = cloud.labels();

    auto add_node = [&](std::size_t interval_index, std::vector<std::size_t> members) {
        MapperNode node;
        node.id = g.nodes.size();
        node.interval_index = interval_index;
        std::sort(members.begin(), members.end());
        double sum = 0.0;
        for (std::size_t m : members) {
            sum += lens.values[m];
            if (labels) ++node.label_histogram[(*labels)[m]];
        }
        node.mean_lens = sum / static_cast<double>(members.size());
        node.members = std::move(members);
        g.nodes.push_back(std::move(node));
    };

    for (std::size_t k = 0; k < cover.intervals.size(); ++k) {
        const auto subset = preimage(lens.values, cover.intervals[k]);
        if (subset.empty()) continue;
        const auto result = clustering::dbscan(cloud, subset, params.eps, params.min_pts, params.metric);

        std::vector<std::vector<std::size_t>> groups(result.n_clusters);
        std::vector<std::size_t> noise;
        for (std::size_t pos = 0; pos < subset.size(); ++pos) {
            const auto label = result.labels[pos];
            if (label == clustering::kNoise)
                noise.push_back(subset[pos]);
            else
                groups[static_cast<std::size_t>(label)].push_back(subset[pos]);
        }
        for (auto& members : groups) add_node(k, std::move(members));
        if (params.noise == NoisePolicy::Singletons)
            for (std::size_t m : noise) add_node(k, {m});
    }

    g.edges = nerve_edges(g.nodes, cloud.size());
    return g;
}

struct GraphSummary {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    std::size_t n_components = 0;
    std::size_t cycle_rank = 0;  // E - V + C

    friend bool operator==(const GraphSummary&, const GraphSummary&) = default;
};

inline GraphSummary graph_summary(const MapperGraph& g) {
    std::vector<std::size_t> parent(g.nodes.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = g.nodes.size();
    for (const auto& e : g.edges) {
        const std::size_t ra = find(e.a), rb = find(e.b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    GraphSummary s;
    s.n_nodes = g.nodes.size();
    s.n_edges = g.edges.size();
    s.n_components = components;
    s.cycle_rank = s.n_edges + s.n_components - s.n_nodes;
    return s;
}

}  // namespace gmapper

#endif  // GMAPPER_MAPPER_HPP
