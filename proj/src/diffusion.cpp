#include "neundiff/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace neundiff {

namespace {

// g(d^2)*d = d / (1 + d^2/lambda^2)
inline double flux_term(double d, double inv_lambda2) {
    return d / (1.0 + d * d * inv_lambda2);
}

inline double clamp_intensity(double v) {
    return std::min(255.0, std::max(0.0, v));
}

// One output row. Writes out[x0..x1); neighbor rows up/dn are the clamped row
// pointers for neumann edges (up == cur on the top row, etc). Shared by the
// parallel and serial drivers so both produce bit-identical results;
// noinline keeps the compiler from specializing the arithmetic per call site.
[[gnu::noinline]] void step_row_interior(const double* up, const double* cur, const double* dn,
                                         double* out, int x0, int x1,
                                         double inv_lambda2, double k_ax, double k_diag) {
    for (int x = x0; x < x1; ++x) {
        const double c = cur[x];
        const double ax = flux_term(cur[x - 1] - c, inv_lambda2) +
                          flux_term(cur[x + 1] - c, inv_lambda2) +
                          flux_term(up[x] - c, inv_lambda2) +
                          flux_term(dn[x] - c, inv_lambda2);
        const double di = flux_term(up[x - 1] - c, inv_lambda2) +
                          flux_term(up[x + 1] - c, inv_lambda2) +
                          flux_term(dn[x - 1] - c, inv_lambda2) +
                          flux_term(dn[x + 1] - c, inv_lambda2);
        out[x] = clamp_intensity(c + k_ax * ax + k_diag * di);
    }
}

// Clamped-index variant for neumann border pixels.
[[gnu::noinline]] void step_pixel_clamped(const double* up, const double* cur, const double* dn,
                                          double* out, int x, int w,
                                          double inv_lambda2, double k_ax, double k_diag) {
    const int xm = x > 0 ? x - 1 : 0;
    const int xp = x + 1 < w ? x + 1 : w - 1;
    const double c = cur[x];
    const double ax = flux_term(cur[xm] - c, inv_lambda2) +
                      flux_term(cur[xp] - c, inv_lambda2) +
                      flux_term(up[x] - c, inv_lambda2) +
                      flux_term(dn[x] - c, inv_lambda2);
    const double di = flux_term(up[xm] - c, inv_lambda2) +
                      flux_term(up[xp] - c, inv_lambda2) +
                      flux_term(dn[xm] - c, inv_lambda2) +
                      flux_term(dn[xp] - c, inv_lambda2);
    out[x] = clamp_intensity(c + k_ax * ax + k_diag * di);
}

struct StepCoeffs {
    double inv_lambda2;
    double k_ax;   // dt/h^2 / (1 + 2*diag_weight)
    double k_diag; // k_ax * diag_weight
};

StepCoeffs coeffs(const Raster& u, const DiffusionParams& p) {
    p.validate(u.spacing());
    const double h2 = u.spacing() * u.spacing();
    const double k_ax = p.dt / h2 / (1.0 + 2.0 * p.diag_weight);
    return {1.0 / (p.lambda * p.lambda), k_ax, k_ax * p.diag_weight};
}

void step_one_row(const double* in, double* out, int w, int h, int y, Boundary bc,
                  const StepCoeffs& k) {
    const double* cur = in + static_cast<size_t>(y) * w;
    double* orow = out + static_cast<size_t>(y) * w;
    if (bc == Boundary::dirichlet) {
        if (y == 0 || y == h - 1 || w <= 2) {
            std::copy(cur, cur + w, orow);
            return;
        }
        orow[0] = cur[0];
        orow[w - 1] = cur[w - 1];
        step_row_interior(cur - w, cur, cur + w, orow, 1, w - 1, k.inv_lambda2, k.k_ax, k.k_diag);
    } else {
        const double* up = (y > 0) ? cur - w : cur;
        const double* dn = (y + 1 < h) ? cur + w : cur;
        step_pixel_clamped(up, cur, dn, orow, 0, w, k.inv_lambda2, k.k_ax, k.k_diag);
        if (w > 1) step_pixel_clamped(up, cur, dn, orow, w - 1, w, k.inv_lambda2, k.k_ax, k.k_diag);
        if (w > 2) step_row_interior(up, cur, dn, orow, 1, w - 1, k.inv_lambda2, k.k_ax, k.k_diag);
    }
}

void prepare_output(const Raster& u, Raster& out) {
    if (out.width() != u.width() || out.height() != u.height())
        out = Raster(u.width(), u.height(), 0.0, u.spacing());
    else
        out.set_spacing(u.spacing());
    if (out.data() == u.data())
        throw ValidationError("pm_step must not run in place");
}

} // namespace

Boundary boundary_from_string(const std::string& s) {
    if (s == "dirichlet") return Boundary::dirichlet;
    if (s == "neumann") return Boundary::neumann;
    throw ValidationError("unknown boundary '" + s + "' (expected dirichlet|neumann)");
}

std::string to_string(Boundary b) {
    return b == Boundary::dirichlet ? "dirichlet" : "neumann";
}

DiffusionParams DiffusionParams::for_spacing(double h) {
    if (!(h > 0.0)) throw ValidationError("spacing must be positive");
    DiffusionParams p;
    p.dt = h * h / 7.0;
    return p;
}

void DiffusionParams::validate(double h) const {
    if (!(h > 0.0)) throw ValidationError("spacing must be positive");
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    if (n_iters < 0) throw ValidationError("n_iters must be non-negative");
    if (!(diag_weight > 0.0 && diag_weight <= 1.0))
        throw ValidationError("diag_weight must be in (0,1]");
    // stability cap of the 8-neighbor explicit scheme; tiny slack for the
    // dt = h^2/7 default computed in floating point
    if (dt / (h * h) > (1.0 / 7.0) * (1.0 + 1e-12))
        throw ValidationError("dt/h^2 exceeds the stability bound 1/7");
}

double diffusivity(double s2, double lambda) {
    if (s2 < 0.0) throw ValidationError("squared gradient must be non-negative");
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    return 1.0 / (1.0 + s2 / (lambda * lambda));
}

void pm_step(const Raster& u, const DiffusionParams& p, Raster& out) {
    const StepCoeffs k = coeffs(u, p);
    prepare_output(u, out);
    const int w = u.width();
    const int h = u.height();
    const double* in = u.data();
    double* o = out.data();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) step_one_row(in, o, w, h, y, p.boundary, k);
}

Raster pm_step(const Raster& u, const DiffusionParams& p) {
    Raster out;
    pm_step(u, p, out);
    return out;
}

void pm_step_serial(const Raster& u, const DiffusionParams& p, Raster& out) {
    const StepCoeffs k = coeffs(u, p);
    prepare_output(u, out);
    const int w = u.width();
    const int h = u.height();
    for (int y = 0; y < h; ++y) step_one_row(u.data(), out.data(), w, h, y, p.boundary, k);
}

Raster pm_step_serial(const Raster& u, const DiffusionParams& p) {
    Raster out;
    pm_step_serial(u, p, out);
    return out;
}

Raster pm_run(const Raster& u0, const DiffusionParams& p) {
    p.validate(u0.spacing());
    if (p.n_iters == 0) return u0;
    Raster a = u0;
    Raster b(u0.width(), u0.height(), 0.0, u0.spacing());
    for (int i = 0; i < p.n_iters; ++i) {
        pm_step(a, p, b);
        std::swap(a, b);
    }
    return a;
}

double fwhm_of(double total_time) {
    if (total_time < 0.0) throw ValidationError("total diffusion time must be non-negative");
    return 4.0 * std::sqrt(total_time * std::numbers::ln2);
}

long iters_for_resolution(long n1, double h1, double h2) {
    if (n1 <= 0 || !(h1 > 0.0) || !(h2 > 0.0))
        throw ValidationError("iters_for_resolution arguments must be positive");
    const double exact = static_cast<double>(n1) * h1 * h1 / (h2 * h2);
    if (exact < 0.5)
        throw ValidationError("iteration count rounds to 0 at this resolution; adjust dt instead");
    return std::max(1l, std::lround(exact));
}

} // namespace neundiff
