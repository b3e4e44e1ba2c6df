// Slow, direct reference implementations used to check the library.

#ifndef GMAPPER_TESTS_ORACLES_HPP
#define GMAPPER_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

// A^2 in long double straight from the textbook sum over the sorted,
// standardized sample. The upper tail is taken from erfc directly since
// 1 - Phi(x) cancels for large x.
inline long double anderson_darling(std::vector<double> sample) {
    const std::size_t n = sample.size();
    std::sort(sample.begin(), sample.end());
    long double mu = 0.0L;
    for (double v : sample) mu += v;
    mu /= static_cast<long double>(n);
    long double ss = 0.0L;
    for (double v : sample) ss += (v - mu) * (v - mu);
    const long double sd = std::sqrt(ss / static_cast<long double>(n - 1));

    auto phi = [](long double x) {
        const long double p = 0.5L * std::erfc(-x / std::sqrt(2.0L));
        return std::clamp(p, 1e-15L, 1.0L - 1e-15L);
    };
    auto upper = [](long double x) {
        const long double q = 0.5L * std::erfc(x / std::sqrt(2.0L));
        return std::clamp(q, 1e-15L, 1.0L - 1e-15L);
    };
    long double s = 0.0L;
    for (std::size_t i = 1; i <= n; ++i) {
        const long double zi = phi((sample[i - 1] - mu) / sd);
        const long double tail = upper((sample[n - i] - mu) / sd);
        s += (2.0L * i - 1.0L) * (std::log(zi) + std::log(tail));
    }
    return -static_cast<long double>(n) - s / static_cast<long double>(n);
}

// O(n^2) DBSCAN: core points are joined through union-find, clusters are
// numbered by their smallest core index, and a border point goes to the
// lowest-numbered cluster among its core neighbours.
template <class Dist>
std::vector<std::int32_t> dbscan(std::size_t n, double eps, std::size_t min_pts, Dist dist) {
    std::vector<std::vector<std::size_t>> nbr(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (dist(i, j) <= eps) nbr[i].push_back(j);

    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) core[i] = nbr[i].size() >= min_pts;

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        if (core[i])
            for (std::size_t j : nbr[i])
                if (core[j]) {
                    const auto a = find(i), b = find(j);
                    if (a != b) parent[std::max(a, b)] = std::min(a, b);
                }

    std::map<std::size_t, std::int32_t> cluster_of_root;
    std::vector<std::int32_t> label(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (core[i]) {
            const auto r = find(i);
            if (!cluster_of_root.count(r)) {
                const auto next = static_cast<std::int32_t>(cluster_of_root.size());
                cluster_of_root[r] = next;
            }
            label[i] = cluster_of_root[r];
        }
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) continue;
        for (std::size_t j : nbr[i])
            if (core[j] && (label[i] < 0 || label[j] < label[i])) label[i] = label[j];
    }
    return label;
}

// Renumbers labels in order of first appearance, keeping -1 as is.
inline std::vector<std::int32_t> canonical(const std::vector<std::int32_t>& labels) {
    std::map<std::int32_t, std::int32_t> remap;
    std::vector<std::int32_t> out;
    for (auto l : labels) {
        if (l < 0) {
            out.push_back(-1);
            continue;
        }
        auto it = remap.find(l);
        if (it == remap.end()) it = remap.emplace(l, static_cast<std::int32_t>(remap.size())).first;
        out.push_back(it->second);
    }
    return out;
}

struct Edge {
    std::size_t a, b, shared;
    bool operator==(const Edge&) const = default;
};

// Every pair of member lists, intersected directly.
inline std::vector<Edge> nerve(const std::vector<std::vector<std::size_t>>& members) {
    std::vector<Edge> out;
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            std::vector<std::size_t> x = members[a], y = members[b], common;
            std::sort(x.begin(), x.end());
            std::sort(y.begin(), y.end());
            std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
            if (!common.empty()) out.push_back({a, b, common.size()});
        }
    return out;
}

}  // namespace oracle

#endif
