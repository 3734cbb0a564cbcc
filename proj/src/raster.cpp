#include "neundiff/raster.hpp"

#include <algorithm>

namespace neundiff {

void PointSet::check_no_duplicates() const {
    std::vector<Point> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
        throw ValidationError("duplicate point (" + std::to_string(dup->x) + "," +
                              std::to_string(dup->y) + ") in set '" + source_label + "'");
}

void PointSet::check_in_bounds(int width, int height) const {
    for (const Point& p : points) {
        if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height)
            throw ValidationError("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                                  ") outside raster bounds " + std::to_string(width) + "x" +
                                  std::to_string(height));
    }
}

} // namespace neundiff
