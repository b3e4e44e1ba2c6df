#ifndef GMAPPER_STATS_HPP
#define GMAPPER_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "error.hpp"

namespace gmapper::stats {

// Probabilities are kept in [kProbabilityFloor, 1 - kProbabilityFloor] so that
// log(z) and log(1 - z) stay finite for extreme order statistics.
inline constexpr double kProbabilityFloor = 1e-15;

struct StandardizedSample {
    std::vector<double> values;  // sorted, mean 0, sample variance 1
    std::size_t n = 0;
};

struct AdResult {
    double a2 = 0.0;            // raw Anderson-Darling statistic
    double a2_corrected = 0.0;  // small-sample corrected statistic
    std::size_t n = 0;
};

inline double mean(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

// Unbiased (n - 1) variance around a supplied mean.
inline double sample_variance(std::span<const double> values, double mu) {
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mu;
        ss += d * d;
    }
    return ss / static_cast<double>(values.size() - 1);
}

/// Returns a sorted copy of `values` shifted to mean 0 and scaled to unit
/// sample standard deviation. Throws TooFewPoints for n < 2 and ZeroVariance
/// when all values coincide.
inline StandardizedSample standardize(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw Error(ErrorCode::TooFewPoints, "standardize needs at least 2 values");

    StandardizedSample out;
    out.n = n;
    out.values.assign(values.begin(), values.end());
    std::stable_sort(out.values.begin(), out.values.end());
    if (out.values.front() == out.values.back())
        throw Error(ErrorCode::ZeroVariance, "all values are equal");

    const double mu = mean(out.values);
    const double var = sample_variance(out.values, mu);
    if (!(var > 0.0) || !std::isfinite(var))
        throw Error(ErrorCode::ZeroVariance, "sample variance is not positive");
    const double sd = std::sqrt(var);
    for (double& v : out.values) v = (v - mu) / sd;
    return out;
}

/// Standard normal CDF, clamped to [kProbabilityFloor, 1 - kProbabilityFloor].
inline double normal_cdf(double x) {
    const double p = 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
    return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

inline double ad_correction_factor(std::size_t n) {
    const double nd = static_cast<double>(n);
    return 1.0 + 4.0 / nd - 25.0 / (nd * nd);
}

/// Anderson-Darling normality statistic of `values` against a normal with
/// estimated mean and variance, together with its small-sample correction.
inline AdResult ad_statistic(std::span<const double> values) {
    const StandardizedSample s = standardize(values);
    const std::size_t n = s.n;
    const auto& x = s.values;

    // 1 - Phi(x) is evaluated as Phi(-x) to avoid cancellation in the upper tail.
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double weight = 2.0 * static_cast<double>(i + 1) - 1.0;
        const double log_z = std::log(normal_cdf(x[i]));
        const double log_upper = std::log(normal_cdf(-x[n - 1 - i]));
        sum += weight * (log_z + log_upper);
    }

    AdResult r;
    r.n = n;
    r.a2 = -sum / static_cast<double>(n) - static_cast<double>(n);
    r.a2_corrected = r.a2 * ad_correction_factor(n);
    return r;
}

}  // namespace gmapper::stats

#endif  // GMAPPER_STATS_HPP
