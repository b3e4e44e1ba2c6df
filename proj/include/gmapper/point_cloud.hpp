#ifndef GMAPPER_POINT_CLOUD_HPP
#define GMAPPER_POINT_CLOUD_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace gmapper {

/// n points in d dimensions, stored row-major, with optional per-point labels
/// and column names.
class PointCloud {
public:
    PointCloud() = default;

    PointCloud(std::size_t n, std::size_t d, std::vector<double> coords,
               std::optional<std::vector<std::string>> labels = std::nullopt,
               std::vector<std::string> column_names = {})
        : n_(n), d_(d), coords_(std::move(coords)), labels_(std::move(labels)),
          column_names_(std::move(column_names)) {
        if (coords_.size() != n_ * d_)
            throw Error(ErrorCode::DimensionMismatch, "coordinate buffer does not match n x d");
        if (labels_ && labels_->size() != n_)
            throw Error(ErrorCode::DimensionMismatch, "label count does not match point count");
        for (double c : coords_)
            if (!std::isfinite(c)) throw Error(ErrorCode::SpecInvalid, "non-finite coordinate");
        if (column_names_.empty()) {
            for (std::size_t j = 0; j < d_; ++j) column_names_.push_back("x" + std::to_string(j));
        } else if (column_names_.size() != d_) {
            throw Error(ErrorCode::DimensionMismatch, "column name count does not match d");
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }
    bool empty() const noexcept { return n_ == 0; }

    std::span<const double> row(std::size_t i) const { return {coords_.data() + i * d_, d_}; }
    double at(std::size_t i, std::size_t j) const { return coords_[i * d_ + j]; }

    std::span<const double> data() const noexcept { return coords_; }
    const std::optional<std::vector<std::string>>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& column_names() const noexcept { return column_names_; }

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> coords_;
    std::optional<std::vector<std::string>> labels_;
    std::vector<std::string> column_names_;
};

}  // namespace gmapper

#endif  // GMAPPER_POINT_CLOUD_HPP
