#ifndef GMAPPER_GMM_HPP
#define GMAPPER_GMM_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"
#include "stats.hpp"

namespace gmapper::gmm {

inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr std::size_t kDefaultMaxIterations = 200;

// Variance floor relative to the squared range of the fitted values.
inline constexpr double kVarianceFloorFactor = 1e-6;
// Minimum total responsibility a component must keep.
inline constexpr double kMinComponentMass = 1e-8;

/// Two-component 1-D Gaussian mixture. Components are ordered so m1 <= m2.
struct Gmm2Fit {
    double m1 = 0.0, m2 = 0.0;
    double s1 = 0.0, s2 = 0.0;  // standard deviations
    double w1 = 0.5, w2 = 0.5;
    double log_likelihood = 0.0;
    std::size_t iterations = 0;
};

namespace detail {

struct Params {
    double mean[2];
    double var[2];
    double weight[2];
};

inline double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

// E-step: fills resp with the responsibility of component 0 and returns the
// log-likelihood of the current parameters.
inline double expectation(std::span<const double> x, const Params& p, std::vector<double>& resp) {
    const double log_w0 = std::log(p.weight[0]);
    const double log_w1 = std::log(p.weight[1]);
    const double c0 = log_w0 - 0.5 * std::log(2.0 * std::numbers::pi * p.var[0]);
    const double c1 = log_w1 - 0.5 * std::log(2.0 * std::numbers::pi * p.var[1]);
    const double h0 = 0.5 / p.var[0];
    const double h1 = 0.5 / p.var[1];

    double ll = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d0 = x[i] - p.mean[0];
        const double d1 = x[i] - p.mean[1];
        const double l0 = c0 - h0 * d0 * d0;
        const double l1 = c1 - h1 * d1 * d1;
        // log-sum-exp of (l0, l1)
        if (l0 >= l1) {
            const double e = std::exp(l1 - l0);
            ll += l0 + std::log1p(e);
            resp[i] = 1.0 / (1.0 + e);
        } else {
            const double e = std::exp(l0 - l1);
            ll += l1 + std::log1p(e);
            resp[i] = e / (1.0 + e);
        }
    }
    return ll;
}

inline void maximization(std::span<const double> x, const std::vector<double>& resp,
                         double var_floor, Params& p) {
    const std::size_t n = x.size();
    double mass0 = 0.0, mass1 = 0.0, sum0 = 0.0, sum1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = resp[i];
        mass0 += r;
        mass1 += 1.0 - r;
        sum0 += r * x[i];
        sum1 += (1.0 - r) * x[i];
    }
    if (mass0 < kMinComponentMass || mass1 < kMinComponentMass)
        throw Error(ErrorCode::Degenerate, "a mixture component lost all responsibility mass");

    const double mean0 = sum0 / mass0;
    const double mean1 = sum1 / mass1;
    double ss0 = 0.0, ss1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d0 = x[i] - mean0;
        const double d1 = x[i] - mean1;
        ss0 += resp[i] * d0 * d0;
        ss1 += (1.0 - resp[i]) * d1 * d1;
    }
    p.mean[0] = mean0;
    p.mean[1] = mean1;
    p.var[0] = std::max(ss0 / mass0, var_floor);
    p.var[1] = std::max(ss1 / mass1, var_floor);
    p.weight[0] = mass0 / static_cast<double>(n);
    p.weight[1] = 1.0 - p.weight[0];
}

}  // namespace detail

/// Fits a two-component Gaussian mixture to `values` by expectation-maximization.
///
/// The start is deterministic: centers at c +/- sqrt(2*lambda/pi) where c and
/// lambda are the mean and (population) variance of the values, both standard
/// deviations sqrt(lambda), weights 1/2. Iteration stops when the change in
/// log-likelihood drops below `tol` or after `max_iter` M-steps. If
/// `log_likelihood_trace` is non-null it receives the log-likelihood evaluated
/// before every M-step and once more for the returned parameters.
inline Gmm2Fit fit_gmm2(std::span<const double> values, double tol = kDefaultTolerance,
                        std::size_t max_iter = kDefaultMaxIterations,
                        std::vector<double>* log_likelihood_trace = nullptr) {
    const std::size_t n = values.size();
    if (n < 4) throw Error(ErrorCode::TooFewPoints, "fit_gmm2 needs at least 4 values");

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double range = *hi_it - *lo_it;
    if (!(range > 0.0)) throw Error(ErrorCode::ZeroVariance, "all values are equal");

    const double c = stats::mean(values);
    double lambda = 0.0;
    for (double v : values) lambda += (v - c) * (v - c);
    lambda /= static_cast<double>(n);
    if (!(lambda > 0.0)) throw Error(ErrorCode::ZeroVariance, "variance is not positive");

    const double var_floor = kVarianceFloorFactor * range * range;
    const double offset = std::sqrt(2.0 * lambda / std::numbers::pi);

    detail::Params p{};
    p.mean[0] = c - offset;
    p.mean[1] = c + offset;
    p.var[0] = p.var[1] = std::max(lambda, var_floor);
    p.weight[0] = p.weight[1] = 0.5;

    std::vector<double> resp(n);
    if (log_likelihood_trace) log_likelihood_trace->clear();

    double ll = detail::expectation(values, p, resp);
    if (log_likelihood_trace) log_likelihood_trace->push_back(ll);

    std::size_t iter = 0;
    while (iter < max_iter) {
        detail::maximization(values, resp, var_floor, p);
        ++iter;
        const double next = detail::expectation(values, p, resp);
        if (log_likelihood_trace) log_likelihood_trace->push_back(next);
        // EM never decreases the likelihood; allow for rounding in the sum.
        assert(next >= ll - 1e-9 * (1.0 + std::abs(ll)));
        const double delta = std::abs(next - ll);
        ll = next;
        if (delta < tol) break;
    }

    Gmm2Fit fit;
    std::size_t a = 0, b = 1;
    if (p.mean[1] < p.mean[0]) std::swap(a, b);
    fit.m1 = p.mean[a];
    fit.m2 = p.mean[b];
    fit.s1 = std::sqrt(p.var[a]);
    fit.s2 = std::sqrt(p.var[b]);
    fit.w1 = p.weight[a];
    fit.w2 = p.weight[b];
    fit.log_likelihood = ll;
    fit.iterations = iter;
    return fit;
}

}  // namespace gmapper::gmm

#endif  // GMAPPER_GMM_HPP
