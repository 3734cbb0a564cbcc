#include "neundiff/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace neundiff {

int64_t DensityGrid::total() const {
    return std::accumulate(counts.begin(), counts.end(), int64_t{0});
}

DensityGrid bin_points(const PointSet& ps, int width, int height, int frame_size) {
    if (frame_size < 1) throw ValidationError("frame_size must be >= 1");
    if (width < 1 || height < 1) throw ValidationError("source dimensions must be positive");
    ps.check_in_bounds(width, height);

    DensityGrid g;
    g.frame_size = frame_size;
    g.source_width = width;
    g.source_height = height;
    g.cols = (width + frame_size - 1) / frame_size;
    g.rows = (height + frame_size - 1) / frame_size;
    g.counts.assign(static_cast<size_t>(g.cols) * g.rows, 0);

    for (const Point& p : ps.points)
        ++g.counts[static_cast<size_t>(p.y / frame_size) * g.cols + p.x / frame_size];
    return g;
}

Raster render_density(const DensityGrid& g, double blur_sigma) {
    if (blur_sigma < 0.0) throw ValidationError("blur_sigma must be >= 0");
    Raster img(g.cols, g.rows);

    const int64_t max_count = g.counts.empty() ? 0 : *std::max_element(g.counts.begin(), g.counts.end());
    if (max_count == 0) return img;
    const double scale = 255.0 / static_cast<double>(max_count);
    for (int y = 0; y < g.rows; ++y)
        for (int x = 0; x < g.cols; ++x)
            img.at(x, y) = static_cast<double>(g.count_at(x, y)) * scale;
    if (blur_sigma == 0.0) return img;

    // separable normalized Gaussian, zero padding outside the grid
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * blur_sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (blur_sigma * blur_sigma));
        ksum += kernel[i + radius];
    }
    for (double& k : kernel) k /= ksum;

    Raster tmp(g.cols, g.rows);
    for (int y = 0; y < g.rows; ++y) {
        for (int x = 0; x < g.cols; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = x + i;
                if (xx >= 0 && xx < g.cols) acc += kernel[i + radius] * img.at(xx, y);
            }
            tmp.at(x, y) = acc;
        }
    }
    for (int y = 0; y < g.rows; ++y) {
        for (int x = 0; x < g.cols; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int yy = y + i;
                if (yy >= 0 && yy < g.rows) acc += kernel[i + radius] * tmp.at(x, yy);
            }
            img.at(x, y) = std::min(255.0, std::max(0.0, acc));
        }
    }
    return img;
}

void save_density_csv(const DensityGrid& g, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    for (int y = 0; y < g.rows; ++y) {
        for (int x = 0; x < g.cols; ++x) {
            if (x) f << ',';
            f << g.count_at(x, y);
        }
        f << '\n';
    }
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace neundiff
