#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gmapper/cover.hpp"

using namespace gmapper;
using Catch::Approx;

namespace {

gmm::Gmm2Fit fit_of(double m1, double m2, double s1, double s2) {
    gmm::Gmm2Fit f;
    f.m1 = m1;
    f.m2 = m2;
    f.s1 = s1;
    f.s2 = s2;
    return f;
}

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

std::vector<double> two_modes(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> a(0.0, 0.1), b(1.0, 0.1);
    std::vector<double> v;
    for (std::size_t i = 0; i < n / 2; ++i) {
        v.push_back(a(rng));
        v.push_back(b(rng));
    }
    return v;
}

std::size_t count_in(const cover::Interval& iv, const std::vector<double>& v) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double x) { return iv.contains(x); }));
}

}  // namespace

TEST_CASE("split_interval: equal spreads, no overlap") {
    const auto [l, r] = cover::split_interval({0.0, 1.0}, fit_of(0.25, 0.75, 0.1, 0.1), 0.0);
    CHECK(l.lo == 0.0);
    CHECK(l.hi == Approx(0.5).margin(1e-12));
    CHECK(r.lo == Approx(0.5).margin(1e-12));
    CHECK(r.hi == 1.0);
}

TEST_CASE("split_interval: equal spreads, 20% overlap") {
    const auto [l, r] = cover::split_interval({0.0, 1.0}, fit_of(0.25, 0.75, 0.1, 0.1), 0.2);
    CHECK(l.hi == Approx(0.55).margin(1e-12));
    CHECK(r.lo == Approx(0.45).margin(1e-12));
}

TEST_CASE("split_interval: left end clamps at the right mean") {
    const auto [l, r] = cover::split_interval({0.0, 1.0}, fit_of(0.25, 0.75, 0.4, 0.01), 1.0);
    CHECK(l.hi == 0.75);
    CHECK(r.lo == Approx(0.75 - 2.0 * (0.01 / 0.41) * 0.5).margin(1e-12));
}

TEST_CASE("split_interval: bad inputs") {
    CHECK_THROWS_AS(cover::split_interval({1.0, 1.0}, fit_of(1.0, 1.0, 0.1, 0.1), 0.1), Error);
    CHECK_THROWS_AS(cover::split_interval({0.0, 1.0}, fit_of(0.8, 0.2, 0.1, 0.1), 0.1), Error);
    CHECK_THROWS_AS(cover::split_interval({0.0, 1.0}, fit_of(-0.5, 0.5, 0.1, 0.1), 0.1), Error);
    try {
        cover::split_interval({0.0, 1.0}, fit_of(0.0, 0.0, 0.1, 0.1), 0.1);
        FAIL("expected DegenerateSplit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateSplit);
    }
}

TEST_CASE("selection: single candidate and maximum") {
    std::mt19937_64 rng(1);
    const std::vector<double> one{4.2};
    CHECK(cover::select::max_score(one) == 0);
    CHECK(cover::select::proportional(std::span<const double>(one), rng) == 0);
    const std::vector<double> two{12.0, 3.0};
    CHECK(cover::select::max_score(two) == 0);
    const std::vector<double> tie{5.0, 5.0};
    CHECK(cover::select::max_score(tie) == 0);
}

TEST_CASE("selection: proportional sampling frequency") {
    std::mt19937_64 rng(2024);
    const std::vector<double> scores{30.0, 10.0};
    int first = 0;
    for (int i = 0; i < 10000; ++i) first += cover::select::proportional(std::span<const double>(scores), rng) == 0;
    CHECK(std::abs(first / 10000.0 - 0.75) <= 0.03);
}

TEST_CASE("uniform_cover: examples") {
    const auto one = cover::uniform_cover(0.0, 1.0, 1, 0.7);
    REQUIRE(one.size() == 1);
    CHECK(one.intervals[0].lo == 0.0);
    CHECK(one.intervals[0].hi == 1.0);

    const auto two = cover::uniform_cover(0.0, 1.0, 2, 0.5);
    REQUIRE(two.size() == 2);
    CHECK(two.intervals[0].hi == Approx(2.0 / 3.0).margin(1e-12));
    CHECK(two.intervals[1].lo == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(two.intervals[1].hi == Approx(1.0).margin(1e-12));

    const auto three = cover::uniform_cover(-0.03, 1.05, 3, 0.2);
    REQUIRE(three.size() == 3);
    const double len = 1.08 / 2.6;
    for (const auto& iv : three.intervals) CHECK(iv.length() == Approx(len).margin(1e-12));
    for (std::size_t i = 0; i + 1 < 3; ++i)
        CHECK(three.intervals[i].hi - three.intervals[i + 1].lo == Approx(0.2 * len).margin(1e-12));
    CHECK(three.intervals.front().lo == -0.03);
    CHECK(three.intervals.back().hi >= 1.05);
}

TEST_CASE("uniform_cover: invalid arguments") {
    CHECK_THROWS_AS(cover::uniform_cover(1.0, 1.0, 3, 0.2), Error);
    CHECK_THROWS_AS(cover::uniform_cover(0.0, 1.0, 0, 0.2), Error);
    CHECK_THROWS_AS(cover::uniform_cover(0.0, 1.0, 3, 1.0), Error);
}

TEST_CASE("balanced_cover: equal counts on a grid") {
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[i] = i / 99.0;
    const auto c = cover::balanced_cover(v, 4, 0.0);
    REQUIRE(c.size() == 4);
    for (const auto& iv : c.intervals) CHECK(count_in(iv, v) == 25);
}

TEST_CASE("balanced_cover: duplicated values") {
    const std::vector<double> v{1, 1, 1, 1, 2, 3, 4, 5};
    const auto c = cover::balanced_cover(v, 2, 0.0);
    REQUIRE(c.size() == 2);
    CHECK(count_in(c.intervals[0], v) == 4);
    CHECK(c.intervals[0].contains(1.0));
    CHECK(!c.intervals[0].contains(2.0));
    CHECK(c.intervals[1].lo == 2.0);
    CHECK(c.intervals[1].hi == 5.0);
}

TEST_CASE("balanced_cover: one interval spans the data") {
    const auto v = gaussian(500, 3);
    const auto c = cover::balanced_cover(v, 1, 0.3);
    REQUIRE(c.size() == 1);
    CHECK(c.intervals[0].lo == *std::min_element(v.begin(), v.end()));
    CHECK(c.intervals[0].hi == *std::max_element(v.begin(), v.end()));
}

TEST_CASE("fcm_cover: two tight groups") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    std::vector<double> v;
    for (int i = 0; i < 50; ++i) {
        v.push_back(jitter(rng));
        v.push_back(1.0 + jitter(rng));
    }
    cover::FcmConfig cfg;
    cfg.n_intervals = 2;
    cfg.threshold_tau = 0.5;
    const auto c = cover::fcm_cover(v, cfg);
    REQUIRE(c.size() == 2);
    CHECK(c.intervals[0].lo >= -0.01);
    CHECK(c.intervals[0].hi <= 0.01);
    CHECK(c.intervals[1].lo >= 0.99);
    CHECK(c.intervals[1].hi <= 1.01);
}

TEST_CASE("fcm_cover: vanishing threshold gives full-range intervals") {
    std::vector<double> v(200);
    for (int i = 0; i < 200; ++i) v[i] = i / 199.0;
    cover::FcmConfig cfg;
    cfg.n_intervals = 2;
    cfg.threshold_tau = 1e-6;
    const auto c = cover::fcm_cover(v, cfg);
    REQUIRE(c.size() == 2);
    for (const auto& iv : c.intervals) {
        CHECK(iv.lo == Approx(0.0).margin(1e-9));
        CHECK(iv.hi == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("fcm_cover: symmetric data gives mirrored intervals") {
    auto v = gaussian(400, 12);
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) v.push_back(-v[i]);
    for (double& x : v) x += 3.0;
    cover::FcmConfig cfg;
    cfg.n_intervals = 2;
    cfg.threshold_tau = 0.3;
    cfg.tol = 1e-8;
    const auto c = cover::fcm_cover(v, cfg);
    REQUIRE(c.size() == 2);
    CHECK(c.intervals[0].lo - 3.0 == Approx(-(c.intervals[1].hi - 3.0)).margin(1e-3));
    CHECK(c.intervals[0].hi - 3.0 == Approx(-(c.intervals[1].lo - 3.0)).margin(1e-3));
}

TEST_CASE("fcm_cover: too few distinct values") {
    const std::vector<double> v{1, 1, 2, 2};
    cover::FcmConfig cfg;
    cfg.n_intervals = 3;
    try {
        cover::fcm_cover(v, cfg);
        FAIL("expected TooFewDistinctValues");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewDistinctValues);
    }
}

TEST_CASE("gmapper_cover: gaussian lens is not split") {
    int single = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = cover::gmapper_cover(gaussian(5000, seed), cover::GMapperConfig{});
        if (c.size() == 1 && c.iterations == 0) ++single;
    }
    CHECK(single >= 95);
}

TEST_CASE("gmapper_cover: two modes give two intervals") {
    for (auto search : {cover::SearchMethod::Dfs, cover::SearchMethod::Bfs, cover::SearchMethod::Randomized}) {
        const auto v = two_modes(4000, 21);
        cover::GMapperConfig cfg;
        cfg.g_overlap = 0.1;
        cfg.search = search;
        const auto c = cover::gmapper_cover(v, cfg);
        REQUIRE(c.size() == 2);
        CHECK(c.iterations == 1);
        CHECK(c.intervals[0].contains(0.0));
        CHECK(!c.intervals[0].contains(1.0));
        CHECK(c.intervals[1].contains(1.0));
        CHECK(!c.intervals[1].contains(0.0));
    }
}

TEST_CASE("gmapper_cover: constant lens and empty lens") {
    const std::vector<double> flat(10, 0.5);
    const auto c = cover::gmapper_cover(flat, cover::GMapperConfig{});
    REQUIRE(c.size() == 1);
    CHECK(c.intervals[0].contains(0.5));
    const std::vector<double> none;
    try {
        cover::gmapper_cover(none, cover::GMapperConfig{});
        FAIL("expected EmptyLens");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyLens);
    }
}

TEST_CASE("gmapper_cover: max_intervals caps the search") {
    std::vector<double> v;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> d(0.0, 0.01);
    for (int k = 0; k < 16; ++k)
        for (int i = 0; i < 200; ++i) v.push_back(k + d(rng));
    for (auto search : {cover::SearchMethod::Dfs, cover::SearchMethod::Bfs, cover::SearchMethod::Randomized}) {
        cover::GMapperConfig cfg;
        cfg.search = search;
        cfg.max_intervals = 5;
        const auto c = cover::gmapper_cover(v, cfg);
        CHECK(c.size() <= 5);
        CHECK(c.size() >= 2);
        CHECK(cover::covers(c, v));
    }
}

TEST_CASE("every strategy covers the lens") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v = trial % 2 ? gaussian(600, trial) : two_modes(600, trial);
        if (trial % 5 == 0)
            for (double& x : v) x = std::round(x * 4.0) / 4.0;
        const std::vector<cover::CoverStrategyConfig> configs{
            cover::GMapperConfig{5.0, 0.1, cover::SearchMethod::Dfs},
            cover::GMapperConfig{5.0, 0.2, cover::SearchMethod::Bfs},
            cover::GMapperConfig{5.0, 0.0, cover::SearchMethod::Randomized, static_cast<std::uint64_t>(trial)},
            cover::UniformConfig{7, 0.15},
            cover::BalancedConfig{7, 0.15},
            cover::FcmConfig{4, 0.3},
        };
        for (const auto& cfg : configs) {
            const auto c = cover::build_cover(v, cfg);
            CHECK(cover::covers(c, v));
            CHECK(c.source == cover::strategy_of(cfg));
            CHECK(std::is_sorted(c.intervals.begin(), c.intervals.end(),
                                 [](const auto& a, const auto& b) { return a.lo < b.lo; }));
            for (const auto& iv : c.intervals) CHECK(iv.lo < iv.hi);
        }
    }
}

TEST_CASE("gmapper_cover: larger threshold never adds intervals") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto v = two_modes(2000, seed);
        const auto g = gaussian(1000, seed + 50);
        for (double x : g) v.push_back(0.4 * x + 3.0);
        std::size_t previous = SIZE_MAX;
        for (double t : {1.0, 2.0, 5.0, 10.0, 15.0, 20.0}) {
            cover::GMapperConfig cfg;
            cfg.ad_threshold = t;
            const auto n = cover::gmapper_cover(v, cfg).size();
            CHECK(n <= previous);
            previous = n;
        }
    }
}

TEST_CASE("gmapper_cover: randomized search is reproducible") {
    auto v = two_modes(3000, 5);
    for (double& x : v) x = x * x * x;
    cover::GMapperConfig cfg;
    cfg.search = cover::SearchMethod::Randomized;
    cfg.seed = 123;
    cfg.ad_threshold = 3.0;
    const auto a = cover::gmapper_cover(v, cfg);
    const auto b = cover::gmapper_cover(v, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.intervals[i].lo == b.intervals[i].lo);
        CHECK(a.intervals[i].hi == b.intervals[i].hi);
    }
}
