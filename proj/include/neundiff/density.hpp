#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "neundiff/raster.hpp"

namespace neundiff {

/// Per-frame point counts over a square mesh laid on a raster.
struct DensityGrid {
    int frame_size = 27; // px per mesh frame
    int cols = 0;        // ceil(source_width / frame_size)
    int rows = 0;
    int offset_x = 0;    // grid origin in source pixels
    int offset_y = 0;
    int source_width = 0;
    int source_height = 0;
    std::vector<int64_t> counts; // row-major rows x cols

    int64_t count_at(int fx, int fy) const { return counts[static_cast<size_t>(fy) * cols + fx]; }
    int64_t total() const;
};

/// Point (x,y) lands in frame (x/frame_size, y/frame_size); edge frames may
/// be partial. Points outside the source bounds are a validation error.
DensityGrid bin_points(const PointSet& ps, int width, int height, int frame_size);

/// Counts rescaled linearly to [0,255] (max count -> 255; all-zero grid stays
/// zero), then Gaussian-blurred with sigma in frame units (0 = no blur).
Raster render_density(const DensityGrid& g, double blur_sigma);

/// Raw counts as CSV, comma-separated, one grid row per line.
void save_density_csv(const DensityGrid& g, const std::filesystem::path& path);

} // namespace neundiff
