#pragma once

#include <cstdint>
#include <vector>

#include "neundiff/diffusion.hpp"
#include "neundiff/raster.hpp"

namespace neundiff {

enum class Connectivity { four = 4, eight = 8 };

struct DetectionParams {
    DiffusionParams diffusion;
    double intensity_threshold = 150.0; // candidates brighter than this are background
    long min_blob_area = 60;            // px, smallest plausible soma footprint
    Connectivity connectivity = Connectivity::eight;

    void validate(double h) const;
};

/// Connected components of {u <= threshold}. labels: 0 = background,
/// 1..K = components; areas[k] = pixel count of component k (areas[0] = 0).
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<int32_t> labels;
    std::vector<int64_t> areas;

    int32_t label_at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
};

/// One representative point per minimal plateau: a maximal 8-connected
/// equal-intensity region whose in-bounds exterior neighbors are all strictly
/// brighter. Representative = plateau centroid rounded half-up per axis; if
/// that pixel falls outside the plateau, the plateau pixel nearest to the
/// centroid (ties: smaller y, then smaller x). A constant raster is a single
/// degenerate plateau and yields one point at its centroid.
PointSet local_minima(const Raster& u);

LabelMap component_areas(const Raster& u, double threshold, Connectivity connectivity);

struct RejectionCounts {
    long above_threshold = 0;
    long small_blob = 0;
};

struct Detection {
    PointSet points;          // accepted minima, plateau representatives
    RejectionCounts rejected; // accepted + rejected == raw plateau-minima count
};

/// Full pipeline: diffuse, extract plateau minima, drop candidates brighter
/// than the threshold, drop candidates whose dark component is smaller than
/// min_blob_area. Thresholding and labeling run on the diffused raster.
Detection detect(const Raster& u0, const DetectionParams& p);

/// The post-diffusion part of detect(), for calibration sweeps over an
/// already diffused raster.
Detection detect_on_diffused(const Raster& u, const DetectionParams& p);

/// Otsu threshold over the 256-bin histogram of rounded intensities.
double otsu_threshold(const Raster& u);

} // namespace neundiff
