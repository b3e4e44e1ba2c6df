#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "gmapper/data.hpp"

using namespace gmapper;
using Catch::Approx;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("gmapper_test_" + name);
    std::ofstream(path) << content;
    return path;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("generate: circle on evenly spaced angles") {
    data::Circle c;
    c.n = 4;
    c.radius = 1.0;
    c.center_x = 0.0;
    c.center_y = 0.0;
    c.noise_sd = 0.0;
    c.even_angles = true;
    const auto cloud = data::generate({c, 0});
    const double expected[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(cloud.at(i, 0) == Approx(expected[i][0]).margin(1e-15));
        CHECK(cloud.at(i, 1) == Approx(expected[i][1]).margin(1e-15));
    }
}

TEST_CASE("generate: default circle stays near its radius") {
    const auto cloud = data::generate({data::Circle{}, 42});
    REQUIRE(cloud.size() == 5000);
    REQUIRE(cloud.dim() == 2);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double r = std::hypot(cloud.at(i, 0) - 0.5, cloud.at(i, 1) - 0.5);
        CHECK(std::abs(r - 0.5) < 6 * 0.005);
    }
}

TEST_CASE("generate: two circles and klein bottle shapes") {
    const auto two = data::generate({data::TwoCircles{}, 7});
    CHECK(two.size() == 5000);
    CHECK(two.dim() == 2);
    REQUIRE(two.labels());
    CHECK((*two.labels())[0] == "inner");
    CHECK((*two.labels())[4999] == "outer");

    const auto kb = data::generate({data::KleinBottle{}, 7});
    CHECK(kb.size() == 15875);
    CHECK(kb.dim() == 5);
    for (std::size_t i = 0; i < kb.size(); i += 97) {
        const double rho = std::hypot(kb.at(i, 0), kb.at(i, 1));
        CHECK(rho >= 1.0 - 1e-12);
        CHECK(rho <= 3.0 + 1e-12);
        CHECK(std::abs(kb.at(i, 4)) <= 0.1 + 1e-15);
    }
}

TEST_CASE("generate: same seed gives identical data") {
    data::TwoCircles small;
    small.n = 300;
    const auto a = data::generate({small, 99});
    const auto b = data::generate({small, 99});
    const auto c = data::generate({small, 100});
    CHECK(std::ranges::equal(a.data(), b.data()));
    CHECK(!std::ranges::equal(a.data(), c.data()));
}

TEST_CASE("generate: invalid specs") {
    data::Circle empty;
    empty.n = 0;
    CHECK(code_of([&] { data::generate({empty, 1}); }) == ErrorCode::SpecInvalid);
    data::TwoCircles swapped;
    swapped.r_inner = 1.0;
    swapped.r_outer = 0.5;
    CHECK(code_of([&] { data::generate({swapped, 1}); }) == ErrorCode::SpecInvalid);
    data::Circle c;
    c.noise_sd = -1.0;
    CHECK(code_of([&] { data::generate({c, 1}); }) == ErrorCode::SpecInvalid);
}

TEST_CASE("load_csv: plain numeric file") {
    const auto path = temp_file("plain.csv", "x,y\n0,1\n2,3\n4,5\n");
    const auto cloud = data::load_csv(path);
    CHECK(cloud.size() == 3);
    CHECK(cloud.dim() == 2);
    CHECK(!cloud.labels());
    CHECK(cloud.at(2, 1) == 5.0);
    CHECK(cloud.column_names() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("load_csv: label column") {
    const auto path = temp_file("labels.csv", "a,class,b\n1,cat,2\n3,dog,4\n");
    const auto cloud = data::load_csv(path, std::string("class"));
    CHECK(cloud.dim() == 2);
    REQUIRE(cloud.labels());
    CHECK(*cloud.labels() == std::vector<std::string>{"cat", "dog"});
    CHECK(cloud.at(1, 1) == 4.0);
}

TEST_CASE("load_csv: errors") {
    const auto bad = temp_file("bad.csv", "x,y\n1,2\n3,oops\n");
    try {
        data::load_csv(bad);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    const auto ragged = temp_file("ragged.csv", "x,y\n1,2\n3\n");
    CHECK(code_of([&] { data::load_csv(ragged); }) == ErrorCode::RaggedRows);
    CHECK(code_of([] { data::load_csv("/nonexistent/dir/file.csv"); }) == ErrorCode::IoError);
}

TEST_CASE("write_csv: round trip") {
    data::TwoCircles small;
    small.n = 50;
    const auto cloud = data::generate({small, 3});
    const auto path = std::filesystem::temp_directory_path() / "gmapper_test_roundtrip.csv";
    data::write_csv(cloud, path);
    const auto back = data::load_csv(path, std::string("label"));
    CHECK(std::ranges::equal(back.data(), cloud.data()));
    CHECK(*back.labels() == *cloud.labels());
    CHECK(code_of([&] { data::write_csv(cloud, "/nonexistent/dir/out.csv"); }) == ErrorCode::IoError);
}
