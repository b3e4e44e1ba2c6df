#ifndef GMAPPER_DATA_HPP
#define GMAPPER_DATA_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "error.hpp"
#include "point_cloud.hpp"

namespace gmapper::data {

// Sampling noise defaults to this fraction of the radius.
inline constexpr double kDefaultNoiseFraction = 0.01;

struct Circle {
    std::size_t n = 5000;
    double radius = 0.5;
    double center_x = 0.5;
    double center_y = 0.5;
    std::optional<double> noise_sd;  // defaults to 0.01 * radius
    bool even_angles = false;        // angles 2*pi*i/n instead of uniform draws
};

struct TwoCircles {
    std::size_t n = 5000;
    double r_inner = 0.5;
    double r_outer = 1.0;
    std::optional<double> noise_sd;  // defaults to 0.01 * radius of each circle
};

struct KleinBottle {
    std::size_t n = 15875;
    bool grid = false;  // near-square (u, v) grid instead of uniform draws
};

struct Csv {
    std::filesystem::path path;
    std::optional<std::string> label_column;
};

struct DatasetSpec {
    std::variant<Circle, TwoCircles, KleinBottle, Csv> kind = Circle{};
    std::uint64_t seed = 0;
};

// Fifth coordinate of the Klein bottle embedding is this multiple of cos(u).
inline constexpr double kKleinFifthScale = 0.1;

/// Maps (u, v) in [0, 2pi)^2 onto the Klein bottle in R^5.
inline std::array<double, 5> klein_point(double u, double v) {
    return {(2.0 + std::cos(v)) * std::cos(u), (2.0 + std::cos(v)) * std::sin(u), std::sin(v) * std::cos(u / 2.0),
            std::sin(v) * std::sin(u / 2.0), kKleinFifthScale * std::cos(u)};
}

namespace detail {

inline void append_circle(std::vector<double>& coords, std::size_t n, double radius, double cx, double cy,
                          double noise_sd, bool even, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = even ? 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) : angle(rng);
        const double r = noise_sd > 0.0 ? radius + noise_sd * noise(rng) : radius;
        coords.push_back(cx + r * std::cos(t));
        coords.push_back(cy + r * std::sin(t));
    }
}

inline double noise_or_default(const std::optional<double>& sd, double radius) {
    const double value = sd.value_or(kDefaultNoiseFraction * radius);
    if (!(value >= 0.0) || !std::isfinite(value)) throw Error(ErrorCode::SpecInvalid, "noise_sd must be >= 0");
    return value;
}

}  // namespace detail

inline PointCloud load_csv(const std::filesystem::path& path,
                           const std::optional<std::string>& label_column = std::nullopt);

/// Samples a point cloud. Same spec and seed give bit-identical output.
inline PointCloud generate(const DatasetSpec& spec) {
    std::mt19937_64 rng(spec.seed);

    if (const auto* c = std::get_if<Circle>(&spec.kind)) {
        if (c->n < 1) throw Error(ErrorCode::SpecInvalid, "circle needs n >= 1");
        if (!(c->radius > 0.0)) throw Error(ErrorCode::SpecInvalid, "circle radius must be > 0");
        std::vector<double> coords;
        coords.reserve(2 * c->n);
        detail::append_circle(coords, c->n, c->radius, c->center_x, c->center_y,
                              detail::noise_or_default(c->noise_sd, c->radius), c->even_angles, rng);
        return PointCloud(c->n, 2, std::move(coords));
    }

    if (const auto* tc = std::get_if<TwoCircles>(&spec.kind)) {
        if (tc->n < 2) throw Error(ErrorCode::SpecInvalid, "two_circles needs n >= 2");
        if (!(tc->r_inner > 0.0) || !(tc->r_inner < tc->r_outer))
            throw Error(ErrorCode::SpecInvalid, "two_circles needs 0 < r_inner < r_outer");
        const std::size_t inner = tc->n / 2;
        const std::size_t outer = tc->n - inner;
        std::vector<double> coords;
        coords.reserve(2 * tc->n);
        detail::append_circle(coords, inner, tc->r_inner, 0.0, 0.0, detail::noise_or_default(tc->noise_sd, tc->r_inner),
                              false, rng);
        detail::append_circle(coords, outer, tc->r_outer, 0.0, 0.0, detail::noise_or_default(tc->noise_sd, tc->r_outer),
                              false, rng);
        std::vector<std::string> labels(inner, "inner");
        labels.resize(tc->n, "outer");
        return PointCloud(tc->n, 2, std::move(coords), std::move(labels));
    }

    if (const auto* kb = std::get_if<KleinBottle>(&spec.kind)) {
        if (kb->n < 1) throw Error(ErrorCode::SpecInvalid, "klein_bottle needs n >= 1");
        std::vector<double> coords;
        coords.reserve(5 * kb->n);
        constexpr double two_pi = 2.0 * std::numbers::pi;
        auto push = [&](double u, double v) {
            for (double x : klein_point(u, v)) coords.push_back(x);
        };
        if (kb->grid) {
            const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(kb->n))));
            for (std::size_t i = 0; i < kb->n; ++i)
                push(two_pi * static_cast<double>(i / side) / static_cast<double>(side),
                     two_pi * static_cast<double>(i % side) / static_cast<double>(side));
        } else {
            std::uniform_real_distribution<double> angle(0.0, two_pi);
            for (std::size_t i = 0; i < kb->n; ++i) {
                const double u = angle(rng);
                const double v = angle(rng);
                push(u, v);
            }
        }
        return PointCloud(kb->n, 5, std::move(coords));
    }

    const auto& csv = std::get<Csv>(spec.kind);
    return load_csv(csv.path, csv.label_column);
}

namespace detail {

inline std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline std::optional<double> parse_double(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace detail

/// Reads a comma-separated file with a header row. Every column except the
/// optional label column must be numeric.
inline PointCloud load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "'" + path.string() + "' has no header row");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = detail::split_row(line);

    std::optional<std::size_t> label_index;
    if (label_column) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == *label_column) label_index = j;
        if (!label_index) throw Error(ErrorCode::ParseError, "no column named '" + *label_column + "'");
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != label_index) names.push_back(header[j]);

    std::vector<double> coords;
    std::vector<std::string> labels;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_row(line);
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << "line " << line_no << " has " << cells.size() << " cells, header has " << header.size();
            throw Error(ErrorCode::RaggedRows, msg.str());
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == label_index) {
                labels.push_back(cells[j]);
                continue;
            }
            const auto value = detail::parse_double(cells[j]);
            if (!value) {
                std::ostringstream msg;
                msg << "line " << line_no << ", column '" << header[j] << "': cannot parse '" << cells[j] << "'";
                throw Error(ErrorCode::ParseError, msg.str());
            }
            coords.push_back(*value);
        }
        ++rows;
    }

    std::optional<std::vector<std::string>> maybe_labels;
    if (label_index) maybe_labels = std::move(labels);
    const std::size_t dim = names.size();
    return PointCloud(rows, dim, std::move(coords), std::move(maybe_labels), std::move(names));
}

/// Writes coordinates (and a trailing "label" column when present) as CSV.
inline void write_csv(const PointCloud& cloud, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    const auto& names = cloud.column_names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    if (cloud.labels()) out << (names.empty() ? "" : ",") << "label";
    out << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t j = 0; j < cloud.dim(); ++j) out << (j ? "," : "") << cloud.at(i, j);
        if (cloud.labels()) out << (cloud.dim() ? "," : "") << (*cloud.labels())[i];
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace gmapper::data

#endif  // GMAPPER_DATA_HPP
