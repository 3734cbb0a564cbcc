#pragma once

#include "neundiff/raster.hpp"

namespace neundiff {

enum class Boundary { dirichlet, neumann };

Boundary boundary_from_string(const std::string& s);
std::string to_string(Boundary b);

/// Parameters of the explicit 8-neighbor Perona-Malik scheme.
///
/// The update for an interior pixel c is
///   u'(c) = u(c) + (dt/h^2) / (1 + 2*diag_weight)
///                * sum_d w_d * g(delta_d^2, lambda) * delta_d
/// with delta_d = u(neighbor_d) - u(c), w_d = 1 for the 4 axial neighbors and
/// diag_weight for the 4 diagonals. The 1/(1+2*diag_weight) factor makes the
/// scheme consistent with u_t = div(g grad u) at unit diffusivity for any
/// diag_weight, so total time T = n_iters*dt obeys the fwhm relation below.
struct DiffusionParams {
    double lambda = 11.0;      // intensity-gradient scale of g
    double dt = 1.0 / 7.0;     // time step, grid-unit^2
    int n_iters = 12;
    Boundary boundary = Boundary::dirichlet;
    double diag_weight = 0.5;  // inverse squared diagonal distance

    /// Defaults for a raster with pixel spacing h (dt = h^2/7).
    static DiffusionParams for_spacing(double h);

    /// Throws ValidationError unless lambda>0, dt>0, n_iters>=0,
    /// diag_weight in (0,1] and dt/h^2 <= 1/7 (the 8-neighbor stability cap).
    void validate(double h) const;

    double total_time() const { return n_iters * dt; }
};

/// g(s^2) = (1 + s^2/lambda^2)^-1, strictly decreasing in s^2, g(0) = 1.
double diffusivity(double s2, double lambda);

/// One explicit Jacobi step (reads `u`, writes `out`; never in place).
/// dirichlet: the boundary ring is copied unchanged. neumann: out-of-bounds
/// neighbors clamp to the nearest in-bounds pixel (zero flux across borders).
/// OpenMP-parallel over rows; bit-identical to pm_step_serial and across
/// thread counts.
void pm_step(const Raster& u, const DiffusionParams& p, Raster& out);
Raster pm_step(const Raster& u, const DiffusionParams& p);

/// Serial reference implementation of pm_step, kept for tests and benchmarks.
void pm_step_serial(const Raster& u, const DiffusionParams& p, Raster& out);
Raster pm_step_serial(const Raster& u, const DiffusionParams& p);

/// n_iters applications of pm_step (0 returns the input unchanged).
Raster pm_run(const Raster& u0, const DiffusionParams& p);

/// fwhm = 4*sqrt(T*ln 2) of the impulse response after total diffusion time T.
double fwhm_of(double total_time);

/// Iteration count preserving the smoothing extent across resolutions:
/// h1^2*N1 = h2^2*N2, rounded half-up, minimum 1. Throws ValidationError when
/// the exact value rounds to 0 (adjust dt explicitly instead).
long iters_for_resolution(long n1, double h1, double h2);

} // namespace neundiff
