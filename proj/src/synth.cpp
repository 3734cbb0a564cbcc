#include "neundiff/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "neundiff/rng.hpp"

namespace neundiff {

namespace {

struct Disk {
    int cx = 0;
    int cy = 0;
    double radius = 0.0;
    double sigma = 0.0; // diameter/4
    double depth = 0.0; // background - center intensity
};

constexpr int kMaxRetries = 200;

bool fits(const Disk& d, int w, int h) {
    const double r = d.radius;
    return d.cx - r >= 1 && d.cx + r <= w - 2 && d.cy - r >= 1 && d.cy + r <= h - 2;
}

double center_dist(const Disk& a, const Disk& b) {
    const double dx = a.cx - b.cx;
    const double dy = a.cy - b.cy;
    return std::sqrt(dx * dx + dy * dy);
}

// separation rule keeping every soma clear of non-partner neighbors; pair
// partners are validated against it before either is committed
bool placement_ok(const std::vector<Disk>& placed, const Disk& d) {
    for (const Disk& other : placed)
        if (center_dist(other, d) < 1.2 * (other.radius + d.radius)) return false;
    return true;
}

Disk sample_disk(SplitMix64& rng, const SynthSpec& s) {
    Disk d;
    const double diam = rng.uniform(s.diameter_min, s.diameter_max);
    d.radius = diam / 2.0;
    d.sigma = diam / 4.0;
    d.depth = s.background - rng.uniform(s.center_intensity_min, s.center_intensity_max);
    d.cx = static_cast<int>(rng.uniform(d.radius + 1.0, s.width - d.radius - 2.0));
    d.cy = static_cast<int>(rng.uniform(d.radius + 1.0, s.height - d.radius - 2.0));
    return d;
}

} // namespace

void SynthSpec::validate() const {
    if (width < 8 || height < 8) throw ValidationError("synth raster must be at least 8x8");
    if (n_cells < 0) throw ValidationError("n_cells must be >= 0");
    if (!(diameter_min >= 3.0 && diameter_max >= diameter_min))
        throw ValidationError("diameters must satisfy 3 <= min <= max");
    if (!(center_intensity_min >= 0.0 && center_intensity_max <= 255.0 &&
          center_intensity_min <= center_intensity_max))
        throw ValidationError("center intensity range must lie in [0,255]");
    if (!(background >= 0.0 && background <= 255.0))
        throw ValidationError("background must be in [0,255]");
    if (background <= center_intensity_max)
        throw ValidationError("background must be brighter than cell centers");
    if (!(touching_fraction >= 0.0 && touching_fraction <= 1.0))
        throw ValidationError("touching_fraction must be in [0,1]");
    if (noise_amplitude < 0.0) throw ValidationError("noise_amplitude must be >= 0");
    if (speckle_count < 0) throw ValidationError("speckle_count must be >= 0");
    if (!(speckle_size >= 1.0)) throw ValidationError("speckle_size must be >= 1");
}

SynthResult generate(const SynthSpec& s) {
    s.validate();
    SplitMix64 rng(s.seed);

    const int n_pairs = static_cast<int>(std::lround(s.n_cells * s.touching_fraction / 2.0));
    const int n_singles = s.n_cells - 2 * n_pairs;

    std::vector<Disk> cells;
    std::vector<int> pair_of; // partner index, -1 for singles
    cells.reserve(s.n_cells);

    for (int p = 0; p < n_pairs; ++p) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
            Disk a = sample_disk(rng, s);
            Disk b = sample_disk(rng, s);
            const double dist = rng.uniform(0.8, 1.1) * (a.radius + b.radius);
            const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            b.cx = a.cx + static_cast<int>(std::lround(dist * std::cos(angle)));
            b.cy = a.cy + static_cast<int>(std::lround(dist * std::sin(angle)));
            if (!fits(a, s.width, s.height) || !fits(b, s.width, s.height)) continue;
            if (a.cx == b.cx && a.cy == b.cy) continue;
            const int ia = static_cast<int>(cells.size());
            if (!placement_ok(cells, a) || !placement_ok(cells, b)) continue;
            cells.push_back(a);
            cells.push_back(b);
            pair_of.push_back(ia + 1);
            pair_of.push_back(ia);
            placed = true;
        }
        if (!placed) throw ValidationError("synth: could not place touching pair (raster too crowded)");
    }
    for (int c = 0; c < n_singles; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
            Disk d = sample_disk(rng, s);
            if (!fits(d, s.width, s.height)) continue;
            if (!placement_ok(cells, d)) continue;
            cells.push_back(d);
            pair_of.push_back(-1);
            placed = true;
        }
        if (!placed) throw ValidationError("synth: could not place cell (raster too crowded)");
    }

    // speckles: small dark artifacts away from every soma, absent from truth
    std::vector<Disk> speckles;
    for (int k = 0; k < s.speckle_count; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
            Disk sp;
            sp.radius = s.speckle_size / 2.0;
            sp.depth = s.background - rng.uniform(50.0, 110.0);
            sp.cx = static_cast<int>(rng.uniform(sp.radius + 1.0, s.width - sp.radius - 2.0));
            sp.cy = static_cast<int>(rng.uniform(sp.radius + 1.0, s.height - sp.radius - 2.0));
            if (!fits(sp, s.width, s.height)) continue;
            bool clear = true;
            for (const Disk& c : cells)
                if (center_dist(c, sp) < c.radius + sp.radius + 6.0) clear = false;
            for (const Disk& o : speckles)
                if (center_dist(o, sp) < 2.0 * (o.radius + sp.radius)) clear = false;
            if (!clear) continue;
            speckles.push_back(sp);
            placed = true;
        }
        if (!placed) throw ValidationError("synth: could not place speckle (raster too crowded)");
    }

    Raster img(s.width, s.height, s.background);
    std::vector<char> soma_mask(img.size(), 0);

    // min-composition keeps every center a strict minimum of the noise-free field
    for (const Disk& c : cells) {
        const int r = static_cast<int>(std::ceil(c.radius));
        for (int y = c.cy - r; y <= c.cy + r; ++y) {
            for (int x = c.cx - r; x <= c.cx + r; ++x) {
                const double dx = x - c.cx;
                const double dy = y - c.cy;
                const double rr = std::sqrt(dx * dx + dy * dy);
                if (rr > c.radius) continue;
                const double v = s.background - c.depth * std::exp(-rr * rr / (2.0 * c.sigma * c.sigma));
                double& px = img.at(x, y);
                px = std::min(px, v);
                soma_mask[static_cast<size_t>(y) * s.width + x] = 1;
            }
        }
    }
    for (const Disk& sp : speckles) {
        const int r = static_cast<int>(std::ceil(sp.radius));
        const double dark = s.background - sp.depth;
        for (int y = sp.cy - r; y <= sp.cy + r; ++y) {
            for (int x = sp.cx - r; x <= sp.cx + r; ++x) {
                const double dx = x - sp.cx;
                const double dy = y - sp.cy;
                if (dx * dx + dy * dy > sp.radius * sp.radius) continue;
                double& px = img.at(x, y);
                px = std::min(px, dark);
            }
        }
    }

    if (s.noise_amplitude > 0.0) {
        for (size_t i = 0; i < img.size(); ++i) {
            if (!soma_mask[i]) continue;
            double& px = img.values()[i];
            px = std::min(255.0, std::max(0.0, px + rng.uniform(-s.noise_amplitude, s.noise_amplitude)));
        }
    }

    SynthResult res;
    res.image = std::move(img);
    res.truth.source_label = "truth";
    for (const Disk& c : cells) res.truth.points.push_back({c.cx, c.cy});
    res.truth.check_no_duplicates();
    return res;
}

} // namespace neundiff
