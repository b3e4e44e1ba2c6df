#ifndef GMAPPER_COVER_HPP
#define GMAPPER_COVER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "gmm.hpp"
#include "stats.hpp"

namespace gmapper::cover {

/// Closed interval [lo, hi] of lens values.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    std::optional<double> ad;  // cached corrected AD statistic of the members
    bool tested = false;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {}

    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    double length() const noexcept { return hi - lo; }
};

enum class Strategy { GMapper, Uniform, Balanced, Fcm };
enum class SearchMethod { Dfs, Bfs, Randomized };

constexpr std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::GMapper: return "gmapper";
        case Strategy::Uniform: return "uniform";
        case Strategy::Balanced: return "balanced";
        case Strategy::Fcm: return "fcm";
    }
    return "?";
}

constexpr std::string_view to_string(SearchMethod m) {
    switch (m) {
        case SearchMethod::Dfs: return "dfs";
        case SearchMethod::Bfs: return "bfs";
        case SearchMethod::Randomized: return "random";
    }
    return "?";
}

struct IntervalCover {
    std::vector<Interval> intervals;  // sorted by lo
    Strategy source = Strategy::Uniform;
    std::size_t iterations = 0;  // splits performed (G-Mapper only)

    std::size_t size() const noexcept { return intervals.size(); }
};

struct GMapperConfig {
    double ad_threshold = 10.0;
    double g_overlap = 0.1;
    SearchMethod search = SearchMethod::Dfs;
    std::uint64_t seed = 0;  // only the randomized search draws from it
    std::size_t max_intervals = 256;
    double gmm_tol = gmm::kDefaultTolerance;
    std::size_t gmm_max_iter = gmm::kDefaultMaxIterations;
};

struct UniformConfig {
    std::size_t n_intervals = 10;
    double gain = 0.2;
};

struct BalancedConfig {
    std::size_t n_intervals = 10;
    double gain = 0.2;
};

struct FcmConfig {
    std::size_t n_intervals = 10;
    double threshold_tau = 0.3;
    double fuzzifier = 2.0;
    double tol = 0.005;
    std::uint64_t seed = 0;  // initialization is quantile based; kept for config symmetry
    std::size_t max_iter = 1000;
};

using CoverStrategyConfig = std::variant<GMapperConfig, UniformConfig, BalancedConfig, FcmConfig>;

inline Strategy strategy_of(const CoverStrategyConfig& cfg) {
    return static_cast<Strategy>(cfg.index());
}

inline void validate(const GMapperConfig& c) {
    if (!(c.ad_threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "ad_threshold must be > 0");
    if (!(c.g_overlap >= 0.0 && c.g_overlap < 1.0))
        throw Error(ErrorCode::InvalidArgument, "g_overlap must lie in [0, 1)");
    if (c.max_intervals < 1) throw Error(ErrorCode::InvalidArgument, "max_intervals must be >= 1");
}

inline void validate_gain(std::size_t n, double gain) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n_intervals must be >= 1");
    if (!(gain >= 0.0 && gain < 1.0)) throw Error(ErrorCode::InvalidArgument, "gain must lie in [0, 1)");
}

inline void validate(const FcmConfig& c) {
    if (c.n_intervals < 2) throw Error(ErrorCode::InvalidArgument, "fcm needs n_intervals >= 2");
    if (!(c.threshold_tau > 0.0 && c.threshold_tau < 1.0))
        throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1)");
    if (!(c.fuzzifier > 1.0)) throw Error(ErrorCode::InvalidArgument, "fuzzifier must be > 1");
    if (!(c.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
}

/// True if every lens value lies in at least one interval.
inline bool covers(const IntervalCover& cover, std::span<const double> lens) {
    return std::all_of(lens.begin(), lens.end(), [&](double x) {
        return std::any_of(cover.intervals.begin(), cover.intervals.end(),
                           [x](const Interval& iv) { return iv.contains(x); });
    });
}

namespace detail {

// Turns [v, v] into a proper interval that still contains v and nothing else
// of the data.
inline Interval widened(double lo, double hi) {
    if (lo < hi) return {lo, hi};
    return {lo, std::nextafter(lo, std::numeric_limits<double>::infinity())};
}

inline void sort_by_lo(std::vector<Interval>& ivs) {
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
}

inline void check_finite(std::span<const double> lens) {
    for (double v : lens)
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "lens contains a non-finite value");
}

}  // namespace detail

/// Splits `iv` into two overlapping children using the means and standard
/// deviations of a two-component mixture. The boundary divides [m1, m2] in the
/// ratio s1 : s2 and each side extends past it by a factor (1 + g_overlap),
/// clamped at the opposite mean.
inline std::pair<Interval, Interval> split_interval(const Interval& iv, const gmm::Gmm2Fit& fit,
                                                    double g_overlap) {
    if (!(iv.lo < iv.hi)) throw Error(ErrorCode::InvalidArgument, "interval must satisfy lo < hi");
    if (fit.m1 > fit.m2) throw Error(ErrorCode::InvalidArgument, "means must be ordered");
    if (fit.m1 < iv.lo || fit.m2 > iv.hi)
        throw Error(ErrorCode::InvalidArgument, "mixture means must lie inside the interval");

    const double gap = fit.m2 - fit.m1;
    const double denom = fit.s1 + fit.s2;
    const double left_hi = std::min(fit.m1 + (1.0 + g_overlap) * fit.s1 / denom * gap, fit.m2);
    const double right_lo = std::max(fit.m2 - (1.0 + g_overlap) * fit.s2 / denom * gap, fit.m1);

    Interval left{iv.lo, left_hi};
    Interval right{right_lo, iv.hi};
    if (!(left.lo < left.hi) || !(right.lo < right.hi))
        throw Error(ErrorCode::DegenerateSplit, "split produced an empty interval");
    return {left, right};
}

namespace select {

/// Index of the largest score; ties go to the earliest entry.
inline std::size_t max_score(std::span<const double> scores) {
    if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no candidates to select from");
    return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

/// Samples an index with probability proportional to its (non-negative part
/// of the) score. Falls back to a uniform draw when every score is zero.
template <class Rng>
std::size_t proportional(std::span<const double> scores, Rng& rng) {
    if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no candidates to select from");
    double total = 0.0;
    for (double s : scores) total += std::max(s, 0.0);
    if (!(total > 0.0)) {
        std::uniform_int_distribution<std::size_t> pick(0, scores.size() - 1);
        return pick(rng);
    }
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        acc += std::max(scores[i], 0.0);
        if (u < acc) return i;
    }
    // u landed on the upper edge through rounding
    for (std::size_t i = scores.size(); i-- > 0;)
        if (scores[i] > 0.0) return i;
    return scores.size() - 1;
}

}  // namespace select

namespace detail {

// Shared machinery for the G-Mapper search policies. Lens values are sorted
// once so that the members of any closed interval form a contiguous range.
class SplitSearch {
public:
    SplitSearch(std::span<const double> lens, const GMapperConfig& cfg)
        : sorted_(lens.begin(), lens.end()), cfg_(cfg) {
        std::sort(sorted_.begin(), sorted_.end());
    }

    const std::vector<double>& sorted() const noexcept { return sorted_; }

    std::span<const double> members(const Interval& iv) const {
        const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), iv.lo);
        const auto last = std::upper_bound(first, sorted_.end(), iv.hi);
        return {first, last};
    }

    // Fills iv.ad; leaves it empty when the statistic cannot be computed.
    void score(Interval& iv) const {
        if (iv.ad || iv.tested) return;
        try {
            iv.ad = stats::ad_statistic(members(iv)).a2_corrected;
        } catch (const Error&) {
            iv.ad.reset();
            iv.tested = true;  // untestable intervals are kept as they are
        }
    }

    bool passes(const Interval& iv) const { return iv.tested || !iv.ad || *iv.ad < cfg_.ad_threshold; }

    std::optional<std::pair<Interval, Interval>> try_split(const Interval& iv) const {
        const auto parent = members(iv);
        try {
            const auto fit = gmm::fit_gmm2(parent, cfg_.gmm_tol, cfg_.gmm_max_iter);
            auto children = split_interval(iv, fit, cfg_.g_overlap);
            // A child holding every member of its parent would split the same way forever.
            if (members(children.first).size() == parent.size() ||
                members(children.second).size() == parent.size())
                return std::nullopt;
            return children;
        } catch (const Error&) {
            return std::nullopt;
        }
    }

private:
    std::vector<double> sorted_;
    GMapperConfig cfg_;
};

inline double score_or_lowest(const Interval& iv) {
    return iv.ad ? *iv.ad : -std::numeric_limits<double>::infinity();
}

inline IntervalCover run_dfs(const SplitSearch& search, const GMapperConfig& cfg, Interval root) {
    IntervalCover out;
    out.source = Strategy::GMapper;
    std::vector<Interval> stack{root};
    while (!stack.empty()) {
        Interval iv = stack.back();
        stack.pop_back();
        search.score(iv);
        const std::size_t live = out.intervals.size() + stack.size() + 1;
        std::optional<std::pair<Interval, Interval>> children;
        if (!search.passes(iv) && live < cfg.max_intervals) children = search.try_split(iv);
        if (!children) {
            iv.tested = true;
            out.intervals.push_back(iv);
            continue;
        }
        ++out.iterations;
        auto [left, right] = *children;
        search.score(left);
        search.score(right);
        // the child with the larger statistic is explored next
        if (score_or_lowest(left) >= score_or_lowest(right)) {
            stack.push_back(right);
            stack.push_back(left);
        } else {
            stack.push_back(left);
            stack.push_back(right);
        }
    }
    return out;
}

template <class Select>
IntervalCover run_frontier(const SplitSearch& search, const GMapperConfig& cfg, Interval root,
                           Select&& choose) {
    IntervalCover out;
    out.source = Strategy::GMapper;
    std::vector<Interval> pending{root};
    std::vector<double> scores;
    while (!pending.empty()) {
        // score the frontier; anything passing the test is final
        std::vector<Interval> still;
        for (Interval& iv : pending) {
            search.score(iv);
            if (search.passes(iv)) {
                iv.tested = true;
                out.intervals.push_back(iv);
            } else {
                still.push_back(iv);
            }
        }
        pending = std::move(still);
        if (pending.empty()) break;

        if (out.intervals.size() + pending.size() >= cfg.max_intervals) {
            for (Interval& iv : pending) {
                iv.tested = true;
                out.intervals.push_back(iv);
            }
            break;
        }

        scores.clear();
        for (const Interval& iv : pending) scores.push_back(*iv.ad);
        const std::size_t pick = choose(std::span<const double>(scores));
        Interval chosen = pending[pick];
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));

        if (auto children = search.try_split(chosen)) {
            ++out.iterations;
            pending.push_back(children->first);
            pending.push_back(children->second);
        } else {
            chosen.tested = true;
            out.intervals.push_back(chosen);
        }
    }
    return out;
}

}  // namespace detail

/// G-Mapper cover: starting from [min lens, max lens], repeatedly tests an
/// interval's members with the corrected Anderson-Darling statistic and splits
/// it in two via a Gaussian mixture fit while the statistic is at or above the
/// threshold. Intervals whose statistic or mixture cannot be computed are kept.
inline IntervalCover gmapper_cover(std::span<const double> lens, const GMapperConfig& cfg) {
    validate(cfg);
    if (lens.empty()) throw Error(ErrorCode::EmptyLens, "lens has no values");
    detail::check_finite(lens);

    detail::SplitSearch search(lens, cfg);
    const double lo = search.sorted().front();
    const double hi = search.sorted().back();
    if (lo == hi) {
        IntervalCover out;
        out.source = Strategy::GMapper;
        Interval only = detail::widened(lo, hi);
        only.tested = true;
        out.intervals.push_back(only);
        return out;
    }

    const Interval root{lo, hi};
    IntervalCover out;
    switch (cfg.search) {
        case SearchMethod::Dfs:
            out = detail::run_dfs(search, cfg, root);
            break;
        case SearchMethod::Bfs:
            out = detail::run_frontier(search, cfg, root,
                                       [](std::span<const double> s) { return select::max_score(s); });
            break;
        case SearchMethod::Randomized: {
            std::mt19937_64 rng(cfg.seed);
            out = detail::run_frontier(search, cfg, root, [&rng](std::span<const double> s) {
                return select::proportional(s, rng);
            });
            break;
        }
    }
    detail::sort_by_lo(out.intervals);
    return out;
}

/// n intervals of equal length over [lo, hi]; consecutive intervals share
/// gain * length.
inline IntervalCover uniform_cover(double lo, double hi, std::size_t n_intervals, double gain) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorCode::InvalidRange, "uniform cover needs a finite range with lo < hi");
    validate_gain(n_intervals, gain);

    const double n = static_cast<double>(n_intervals);
    const double length = (hi - lo) / (n - (n - 1.0) * gain);
    const double step = length * (1.0 - gain);

    IntervalCover out;
    out.source = Strategy::Uniform;
    out.intervals.reserve(n_intervals);
    for (std::size_t i = 0; i < n_intervals; ++i) {
        const double a = lo + static_cast<double>(i) * step;
        out.intervals.push_back({a, a + length});
    }
    out.intervals.back().hi = std::max(out.intervals.back().hi, hi);
    return out;
}

namespace detail {

// Places the order statistics at every index in `ks` (sorted, unique, inside
// [first, last)) without sorting the whole range.
inline void multiselect(std::vector<double>& v, std::size_t first, std::size_t last,
                        std::span<const std::size_t> ks) {
    if (ks.empty() || first >= last) return;
    const std::size_t mid = ks.size() / 2;
    const std::size_t k = ks[mid];
    std::nth_element(v.begin() + static_cast<std::ptrdiff_t>(first), v.begin() + static_cast<std::ptrdiff_t>(k),
                     v.begin() + static_cast<std::ptrdiff_t>(last));
    multiselect(v, first, k, ks.subspan(0, mid));
    multiselect(v, k + 1, last, ks.subspan(mid + 1));
}

}  // namespace detail

/// Quantile cover: a uniform cover of rank space [0, N] whose endpoints are
/// mapped through the empirical quantile function of the lens. With gain 0
/// every interval holds the same number of points, +/- 1.
inline IntervalCover balanced_cover(std::span<const double> lens, std::size_t n_intervals, double gain) {
    if (lens.empty()) throw Error(ErrorCode::InvalidRange, "balanced cover needs a nonempty lens");
    validate_gain(n_intervals, gain);
    detail::check_finite(lens);

    const std::size_t n_points = lens.size();
    const auto ranks = uniform_cover(0.0, static_cast<double>(n_points), n_intervals, gain);

    // rank interval [r_lo, r_hi] owns sorted positions ceil(r_lo) .. ceil(r_hi) - 1
    constexpr double kRankSlack = 1e-9;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    spans.reserve(n_intervals);
    for (const Interval& r : ranks.intervals) {
        const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(r.lo - kRankSlack)));
        const auto past = static_cast<std::size_t>(std::max(0.0, std::ceil(r.hi - kRankSlack)));
        const std::size_t a = std::min(first, n_points - 1);
        const std::size_t b = std::clamp(past == 0 ? std::size_t{0} : past - 1, a, n_points - 1);
        spans.emplace_back(a, b);
    }

    std::vector<std::size_t> ks;
    for (auto [a, b] : spans) {
        ks.push_back(a);
        ks.push_back(b);
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<double> values(lens.begin(), lens.end());
    detail::multiselect(values, 0, values.size(), ks);

    IntervalCover out;
    out.source = Strategy::Balanced;
    for (auto [a, b] : spans) out.intervals.push_back(detail::widened(values[a], values[b]));
    detail::sort_by_lo(out.intervals);
    return out;
}

namespace detail {

// Fuzzy memberships of x in clusters with the given centers, written to u.
inline void fcm_memberships(double x, std::span<const double> centers, double exponent, std::span<double> u) {
    const std::size_t c = centers.size();
    std::size_t zeros = 0;
    for (std::size_t k = 0; k < c; ++k)
        if (x == centers[k]) ++zeros;
    if (zeros > 0) {
        for (std::size_t k = 0; k < c; ++k) u[k] = (x == centers[k]) ? 1.0 / static_cast<double>(zeros) : 0.0;
        return;
    }
    // u_k proportional to d_k^(-2/(m-1)); exponent = 1/(m-1) applied to d^2
    double total = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
        const double d2 = (x - centers[k]) * (x - centers[k]);
        const double w = exponent == 1.0 ? 1.0 / d2 : std::pow(d2, -exponent);
        u[k] = w;
        total += w;
    }
    for (std::size_t k = 0; k < c; ++k) u[k] /= total;
}

}  // namespace detail

/// Fuzzy C-means cover of the lens values. Each cluster contributes the hull
/// of the points whose membership exceeds tau. A point that clears tau for no
/// cluster extends the interval of its highest-membership cluster.
inline IntervalCover fcm_cover(std::span<const double> lens, const FcmConfig& cfg) {
    validate(cfg);
    detail::check_finite(lens);
    const std::size_t c = cfg.n_intervals;
    const std::size_t n = lens.size();

    std::vector<double> sorted(lens.begin(), lens.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < c)
        throw Error(ErrorCode::TooFewDistinctValues, "fcm needs at least n_intervals distinct lens values");

    auto quantile_centers = [c](const std::vector<double>& v) {
        std::vector<double> out(c);
        for (std::size_t k = 0; k < c; ++k) {
            const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(c);
            out[k] = v[std::min(v.size() - 1, static_cast<std::size_t>(q * static_cast<double>(v.size())))];
        }
        return out;
    };
    std::vector<double> centers = quantile_centers(sorted);
    if (std::adjacent_find(centers.begin(), centers.end()) != centers.end())
        centers = quantile_centers(distinct);

    const double exponent = 1.0 / (cfg.fuzzifier - 1.0);
    auto weight = [m = cfg.fuzzifier](double u) { return m == 2.0 ? u * u : std::pow(u, m); };

    std::vector<double> u(n * c), next(n * c);
    auto compute = [&](std::vector<double>& dst) {
        for (std::size_t i = 0; i < n; ++i)
            detail::fcm_memberships(lens[i], centers, exponent, std::span<double>(dst.data() + i * c, c));
    };
    compute(u);

    std::vector<double> num(c), den(c);
    for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
        std::fill(num.begin(), num.end(), 0.0);
        std::fill(den.begin(), den.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < c; ++k) {
                const double w = weight(u[i * c + k]);
                num[k] += w * lens[i];
                den[k] += w;
            }
        }
        for (std::size_t k = 0; k < c; ++k)
            if (den[k] > 0.0) centers[k] = num[k] / den[k];

        compute(next);
        double change = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) change = std::max(change, std::abs(next[j] - u[j]));
        u.swap(next);
        if (change < cfg.tol) break;
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lo(c, inf), hi(c, -inf);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < c; ++k) {
            if (u[i * c + k] > cfg.threshold_tau) {
                lo[k] = std::min(lo[k], lens[i]);
                hi[k] = std::max(hi[k], lens[i]);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool covered = false;
        for (std::size_t k = 0; k < c && !covered; ++k) covered = lo[k] <= lens[i] && lens[i] <= hi[k];
        if (covered) continue;
        const auto row = std::span<const double>(u.data() + i * c, c);
        const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        lo[best] = std::min(lo[best], lens[i]);
        hi[best] = std::max(hi[best], lens[i]);
    }

    IntervalCover out;
    out.source = Strategy::Fcm;
    for (std::size_t k = 0; k < c; ++k)
        if (lo[k] <= hi[k]) out.intervals.push_back(detail::widened(lo[k], hi[k]));
    detail::sort_by_lo(out.intervals);
    return out;
}

/// Dispatches on the strategy held by `cfg`.
inline IntervalCover build_cover(std::span<const double> lens, const CoverStrategyConfig& cfg) {
    if (lens.empty()) throw Error(ErrorCode::EmptyLens, "lens has no values");
    return std::visit(
        [&](const auto& c) -> IntervalCover {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, GMapperConfig>) {
                return gmapper_cover(lens, c);
            } else if constexpr (std::is_same_v<T, UniformConfig>) {
                const auto [lo, hi] = std::minmax_element(lens.begin(), lens.end());
                if (*lo == *hi) {
                    IntervalCover out;
                    out.source = Strategy::Uniform;
                    out.intervals.push_back(detail::widened(*lo, *hi));
                    return out;
                }
                return uniform_cover(*lo, *hi, c.n_intervals, c.gain);
            } else if constexpr (std::is_same_v<T, BalancedConfig>) {
                return balanced_cover(lens, c.n_intervals, c.gain);
            } else {
                return fcm_cover(lens, c);
            }
        },
        cfg);
}

}  // namespace gmapper::cover

#endif  // GMAPPER_COVER_HPP
