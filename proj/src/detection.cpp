#include "neundiff/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace neundiff {

namespace {

constexpr std::array<int, 8> kDx8 = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr std::array<int, 8> kDy8 = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr std::array<int, 4> kDx4 = {0, -1, 1, 0};
constexpr std::array<int, 4> kDy4 = {-1, 0, 0, 1};

long round_half_up_div(long long sum, long long n) {
    // floor(sum/n + 1/2) for non-negative sum
    return static_cast<long>((2 * sum + n) / (2 * n));
}

} // namespace

void DetectionParams::validate(double h) const {
    diffusion.validate(h);
    if (!(intensity_threshold >= 0.0 && intensity_threshold <= 255.0))
        throw ValidationError("intensity_threshold must be in [0,255]");
    if (min_blob_area < 1) throw ValidationError("min_blob_area must be >= 1");
    if (connectivity != Connectivity::four && connectivity != Connectivity::eight)
        throw ValidationError("connectivity must be 4 or 8");
}

PointSet local_minima(const Raster& u) {
    const int w = u.width();
    const int h = u.height();
    const double* v = u.data();
    const size_t n = u.size();

    std::vector<int32_t> label(n, -1);
    std::vector<int> stack;
    std::vector<int> plateau;
    PointSet out;
    out.source_label = "minima";

    int32_t next_label = 0;
    for (size_t start = 0; start < n; ++start) {
        if (label[start] != -1) continue;
        const int32_t id = next_label++;
        const double val = v[start];
        bool minimal = true;
        long long sum_x = 0, sum_y = 0;

        plateau.clear();
        stack.clear();
        stack.push_back(static_cast<int>(start));
        label[start] = id;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            plateau.push_back(i);
            const int x = i % w;
            const int y = i / w;
            sum_x += x;
            sum_y += y;
            for (int d = 0; d < 8; ++d) {
                const int nx = x + kDx8[d];
                const int ny = y + kDy8[d];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const int ni = ny * w + nx;
                if (v[ni] == val) {
                    if (label[ni] == -1) {
                        label[ni] = id;
                        stack.push_back(ni);
                    }
                } else if (v[ni] < val) {
                    minimal = false; // keep flooding to mark the whole plateau
                }
            }
        }
        if (!minimal) continue;

        const long long cnt = static_cast<long long>(plateau.size());
        const long cx = round_half_up_div(sum_x, cnt);
        const long cy = round_half_up_div(sum_y, cnt);
        if (label[static_cast<size_t>(cy) * w + cx] == id) {
            out.points.push_back({static_cast<int>(cx), static_cast<int>(cy)});
            continue;
        }
        // Rounded centroid fell outside a non-convex plateau: take the plateau
        // pixel nearest to the exact centroid. Squared distances compared as
        // integers scaled by cnt^2; ties break by smaller y, then smaller x.
        int best = -1;
        __int128 best_d2 = 0;
        for (int i : plateau) {
            const long long x = i % w;
            const long long y = i / w;
            const __int128 dx = static_cast<__int128>(x) * cnt - sum_x;
            const __int128 dy = static_cast<__int128>(y) * cnt - sum_y;
            const __int128 d2 = dx * dx + dy * dy;
            if (best == -1 || d2 < best_d2 ||
                (d2 == best_d2 && (y < best / w || (y == best / w && x < best % w)))) {
                best = i;
                best_d2 = d2;
            }
        }
        out.points.push_back({best % w, best / w});
    }
    return out;
}

LabelMap component_areas(const Raster& u, double threshold, Connectivity connectivity) {
    const int w = u.width();
    const int h = u.height();
    const double* v = u.data();

    LabelMap lm;
    lm.width = w;
    lm.height = h;
    lm.labels.assign(u.size(), 0);
    lm.areas.push_back(0); // background

    const int ndirs = connectivity == Connectivity::eight ? 8 : 4;
    const int* dx = connectivity == Connectivity::eight ? kDx8.data() : kDx4.data();
    const int* dy = connectivity == Connectivity::eight ? kDy8.data() : kDy4.data();

    std::vector<int> stack;
    for (size_t start = 0; start < u.size(); ++start) {
        if (lm.labels[start] != 0 || v[start] > threshold) continue;
        const int32_t id = static_cast<int32_t>(lm.areas.size());
        int64_t area = 0;
        stack.clear();
        stack.push_back(static_cast<int>(start));
        lm.labels[start] = id;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            ++area;
            const int x = i % w;
            const int y = i / w;
            for (int d = 0; d < ndirs; ++d) {
                const int nx = x + dx[d];
                const int ny = y + dy[d];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const int ni = ny * w + nx;
                if (lm.labels[ni] == 0 && v[ni] <= threshold) {
                    lm.labels[ni] = id;
                    stack.push_back(ni);
                }
            }
        }
        lm.areas.push_back(area);
    }
    return lm;
}

Detection detect_on_diffused(const Raster& u, const DetectionParams& p) {
    p.validate(u.spacing());
    Detection det;
    det.points.source_label = "method";

    const PointSet candidates = local_minima(u);
    const LabelMap lm = component_areas(u, p.intensity_threshold, p.connectivity);

    for (const Point& c : candidates.points) {
        if (u.at(c.x, c.y) > p.intensity_threshold) {
            ++det.rejected.above_threshold;
            continue;
        }
        const int32_t id = lm.label_at(c.x, c.y); // > 0 since u(c) <= threshold
        if (lm.areas[id] < p.min_blob_area) {
            ++det.rejected.small_blob;
            continue;
        }
        det.points.points.push_back(c);
    }
    return det;
}

Detection detect(const Raster& u0, const DetectionParams& p) {
    p.validate(u0.spacing());
    const Raster u = pm_run(u0, p.diffusion);
    return detect_on_diffused(u, p);
}

double otsu_threshold(const Raster& u) {
    std::array<int64_t, 256> hist = {};
    for (double v : u.values()) {
        int bin = static_cast<int>(std::lround(v));
        bin = std::clamp(bin, 0, 255);
        ++hist[bin];
    }
    const double total = static_cast<double>(u.size());
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += i * static_cast<double>(hist[i]);

    double best_var = -1.0;
    int best_k = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int k = 0; k < 256; ++k) {
        w0 += static_cast<double>(hist[k]);
        sum0 += k * static_cast<double>(hist[k]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between > best_var) {
            best_var = between;
            best_k = k;
        }
    }
    return static_cast<double>(best_k);
}

} // namespace neundiff
