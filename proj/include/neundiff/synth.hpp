#pragma once

#include <cstdint>

#include "neundiff/raster.hpp"

namespace neundiff {

/// Parametric generator of histology-like test rasters with known centers.
/// Cells are radially darkening wells (background - depth*exp(-r^2/2sigma^2),
/// sigma = diameter/4, truncated at the cell radius), composed by per-pixel
/// minimum. Intra-soma noise creates spurious minima; speckles are small dark
/// artifacts that are not part of the ground truth.
struct SynthSpec {
    int width = 512;
    int height = 512;
    int n_cells = 40;
    double diameter_min = 9.0;  // px; spans small interneurons to large somata
    double diameter_max = 30.0;
    double center_intensity_min = 40.0; // darkest value at a cell center
    double center_intensity_max = 90.0;
    double background = 230.0;
    double touching_fraction = 0.1; // fraction of cells placed as touching pairs
    double noise_amplitude = 12.0;  // additive uniform noise inside somata
    int speckle_count = 10;
    double speckle_size = 3.0; // speckle diameter, px
    uint64_t seed = 1;

    void validate() const;
};

struct SynthResult {
    Raster image;
    PointSet truth; // cell centers in placement order, label "truth"
};

/// Deterministic for a fixed seed. Touching pairs are placed at center
/// distance 0.8-1.1x the sum of radii; all other cells do not overlap.
/// Throws ValidationError when placement is infeasible after bounded retries.
SynthResult generate(const SynthSpec& spec);

} // namespace neundiff
