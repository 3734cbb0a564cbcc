#pragma once

#include <filesystem>
#include <string>

#include "neundiff/raster.hpp"

namespace neundiff {

/// RGB-to-gray conversion policy for color inputs.
enum class GrayMode { luminance, r, g, b };

GrayMode gray_mode_from_string(const std::string& s);
std::string to_string(GrayMode m);

/// Reads an 8/16-bit grayscale or 8-bit RGB PNG or TIFF (detected by magic
/// bytes). 16-bit samples are rescaled linearly to [0,255]; RGB is reduced
/// per `mode` (luminance = 0.299R + 0.587G + 0.114B). spacing is set to 1.
Raster load_raster(const std::filesystem::path& path, GrayMode mode = GrayMode::luminance);

/// Writes an 8-bit grayscale PNG or TIFF (chosen by file extension).
/// Values are rounded half-up; they must already lie in [0,255].
void save_raster(const Raster& r, const std::filesystem::path& path);

/// Reads a point CSV: header exactly `x,y`, one non-negative integer pair per
/// line. Duplicate coordinates are rejected. source_label is the file stem.
PointSet load_points(const std::filesystem::path& path);

/// Writes the point CSV format of load_points, LF line endings, file order.
void save_points(const PointSet& ps, const std::filesystem::path& path);

/// Box-average 2x2 downsampling; trailing odd row/column is dropped and the
/// spacing doubles. Matches the factor-2 subsampling workflow for 40x scans;
/// the exact resampling kernel there is a project choice.
Raster downsample2x2(const Raster& r);

} // namespace neundiff
