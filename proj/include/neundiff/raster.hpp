#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "neundiff/errors.hpp"

namespace neundiff {

/// 2D scalar intensity field, row-major, values kept real-valued in [0, 255].
/// Intensities stay floating point between processing steps; quantization to
/// 8 bit happens only on save.
class Raster {
public:
    Raster() = default;

    Raster(int width, int height, double fill = 0.0, double spacing = 1.0)
        : width_(width), height_(height), spacing_(spacing),
          data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {
        if (width <= 0 || height <= 0)
            throw ValidationError("raster dimensions must be positive");
        if (!(spacing > 0.0))
            throw ValidationError("raster spacing must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return data_.size(); }
    double spacing() const { return spacing_; }
    void set_spacing(double h) {
        if (!(h > 0.0)) throw ValidationError("raster spacing must be positive");
        spacing_ = h;
    }

    double& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    bool operator==(const Raster& o) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    double spacing_ = 1.0;
    std::vector<double> data_;
};

struct Point {
    int x = 0; // column index, origin top-left
    int y = 0; // row index

    bool operator==(const Point&) const = default;
    auto operator<=>(const Point&) const = default;
};

/// Labeled 2D point collection: rater annotations or method detections.
struct PointSet {
    std::vector<Point> points;
    std::string source_label;

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    /// Throws ValidationError on duplicate coordinates.
    void check_no_duplicates() const;
    /// Throws ValidationError if any point lies outside a width x height raster.
    void check_in_bounds(int width, int height) const;
};

} // namespace neundiff
