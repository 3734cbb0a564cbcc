#include <cmath>
#include <numeric>

#include "doctest.h"
#include "neundiff/diffusion.hpp"
#include "oracles.hpp"

using namespace neundiff;

namespace {

Raster raster3x3_center(double center, double rest = 0.0) {
    Raster u(3, 3, rest);
    u.at(1, 1) = center;
    return u;
}

// Independent scalar evaluation of the single-pixel update rule, written
// against the scheme definition, not the kernel code.
double scalar_center_update(double center, double neighbor, double lambda, double dt,
                            double diag_weight) {
    double flux = 0.0;
    const double deltas[8] = {neighbor - center, neighbor - center, neighbor - center,
                              neighbor - center, neighbor - center, neighbor - center,
                              neighbor - center, neighbor - center};
    const double w[8] = {1, 1, 1, 1, diag_weight, diag_weight, diag_weight, diag_weight};
    for (int i = 0; i < 8; ++i)
        flux += w[i] * (deltas[i] / (1.0 + deltas[i] * deltas[i] / (lambda * lambda)));
    return center + dt * flux / (1.0 + 2.0 * diag_weight);
}

} // namespace

TEST_CASE("diffusivity worked values") {
    CHECK(diffusivity(0.0, 11.0) == 1.0);
    CHECK(diffusivity(121.0, 11.0) == 0.5);
    CHECK(diffusivity(363.0, 11.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(diffusivity(-1.0, 11.0), ValidationError);
    CHECK_THROWS_AS(diffusivity(1.0, 0.0), ValidationError);
}

TEST_CASE("diffusivity strictly decreasing") {
    double prev = 2.0;
    for (double s2 = 0.0; s2 <= 1e4; s2 += 37.5) {
        const double g = diffusivity(s2, 11.0);
        CHECK(g <= 1.0);
        CHECK(g > 0.0);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("params validation") {
    DiffusionParams p;
    CHECK_NOTHROW(p.validate(1.0));

    DiffusionParams bad = p;
    bad.dt = 0.2; // > 1/7
    CHECK_THROWS_AS(bad.validate(1.0), ValidationError);
    CHECK_NOTHROW(bad.validate(2.0)); // 0.2/4 < 1/7

    bad = p;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(1.0), ValidationError);
    bad = p;
    bad.n_iters = -1;
    CHECK_THROWS_AS(bad.validate(1.0), ValidationError);
    bad = p;
    bad.diag_weight = 0.0;
    CHECK_THROWS_AS(bad.validate(1.0), ValidationError);
    bad.diag_weight = 1.5;
    CHECK_THROWS_AS(bad.validate(1.0), ValidationError);

    CHECK(DiffusionParams::for_spacing(2.0).dt == doctest::Approx(4.0 / 7.0));
    CHECK_NOTHROW(DiffusionParams::for_spacing(2.0).validate(2.0));
}

TEST_CASE("pm_step constant raster is a fixed point") {
    Raster u(9, 7, 100.0);
    DiffusionParams p;
    SUBCASE("dirichlet") { p.boundary = Boundary::dirichlet; }
    SUBCASE("neumann") { p.boundary = Boundary::neumann; }
    CHECK(pm_step(u, p) == u);
}

TEST_CASE("pm_step single-pixel hand evaluation") {
    // 3x3, all 0 except center 70; lambda=11, dt=1/7, diag 1/2, dirichlet.
    // Frozen from an independent scalar computation:
    // g(4900,11) = 121/5021, flux = 6*g*(-70), center' = 70 - 3630/5021.
    Raster u = raster3x3_center(70.0);
    DiffusionParams p; // defaults are exactly the example parameters
    const Raster out = pm_step(u, p);

    const double frozen = 69.27703644692292;
    CHECK(out.at(1, 1) == doctest::Approx(frozen).epsilon(1e-14));
    CHECK(out.at(1, 1) ==
          doctest::Approx(scalar_center_update(70.0, 0.0, 11.0, 1.0 / 7.0, 0.5)).epsilon(1e-14));

    // dirichlet: the boundary ring is untouched
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            if (x != 1 || y != 1) CHECK(out.at(x, y) == 0.0);
}

TEST_CASE("pm_step heat limit closed form") {
    // lambda -> huge turns g into 1; the normalized stencil then realizes the
    // pure heat update: center' = 70 * (1 - dt * (4+4w)/(1+2w)) = 40.
    Raster u = raster3x3_center(70.0);
    DiffusionParams p;
    p.lambda = 1e9;
    const Raster out = pm_step(u, p);
    CHECK(out.at(1, 1) == doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("pm_run n_iters=0 returns input, constant stays constant") {
    Raster u = oracles::random_raster(16, 12, 3);
    DiffusionParams p;
    p.n_iters = 0;
    CHECK(pm_run(u, p) == u);

    Raster c(16, 12, 42.0);
    p.n_iters = 12;
    CHECK(pm_run(c, p) == c);
}

TEST_CASE("extremum bounds on random rasters") {
    DiffusionParams p;
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        const Raster u0 = oracles::random_raster(64, 64, seed);
        const auto [lo0, hi0] = std::minmax_element(u0.values().begin(), u0.values().end());
        const Raster u = pm_run(u0, p);
        const auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
        CHECK(*lo >= *lo0 - 1e-9);
        CHECK(*hi <= *hi0 + 1e-9);
    }
}

TEST_CASE("neumann conservation per step") {
    DiffusionParams p;
    p.boundary = Boundary::neumann;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        Raster u = oracles::random_raster(32, 48, seed);
        const double sum0 = std::accumulate(u.values().begin(), u.values().end(), 0.0);
        for (int k = 0; k < 12; ++k) {
            u = pm_step(u, p);
            const double sum = std::accumulate(u.values().begin(), u.values().end(), 0.0);
            CHECK(std::abs(sum - sum0) / sum0 < 1e-6);
        }
    }
}

TEST_CASE("parallel and serial kernels are bit-identical") {
    for (auto boundary : {Boundary::dirichlet, Boundary::neumann}) {
        DiffusionParams p;
        p.boundary = boundary;
        const Raster u = oracles::random_raster(65, 43, 11);
        CHECK(pm_step(u, p) == pm_step_serial(u, p));
    }
}

TEST_CASE("pm_step never runs in place") {
    Raster u(8, 8, 1.0);
    DiffusionParams p;
    CHECK_THROWS_AS(pm_step(u, p, u), ValidationError);
}

TEST_CASE("fwhm_of worked values") {
    CHECK(fwhm_of(12.0 / 7.0) == doctest::Approx(4.36).epsilon(0.0025)); // 4.35..4.37
    CHECK(fwhm_of(0.0) == 0.0);
    CHECK(fwhm_of(1.0 / std::log(2.0)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(fwhm_of(-1.0), ValidationError);
}

TEST_CASE("impulse response fwhm matches the prediction") {
    // linear mode: measured kernel width must realize fwhm = 4*sqrt(T ln 2)
    for (int n : {12, 48}) {
        Raster u(129, 129, 0.0);
        u.at(64, 64) = 255.0;
        DiffusionParams p;
        p.lambda = 1e9;
        p.n_iters = n;
        p.boundary = Boundary::neumann;
        const Raster out = pm_run(u, p);
        const double measured = oracles::measure_fwhm_row(out, 64, 64);
        const double predicted = fwhm_of(p.total_time());
        CHECK(measured == doctest::Approx(predicted).epsilon(0.10));
    }
}

TEST_CASE("linear limit matches Gaussian convolution") {
    const Raster u0 = oracles::smooth_random_raster(128, 128, 5, 6.0);
    DiffusionParams p;
    p.lambda = 1e6;
    p.n_iters = 48;
    p.boundary = Boundary::neumann;
    const Raster diffused = pm_run(u0, p);
    const Raster reference =
        oracles::gaussian_convolve_symmetric(u0, std::sqrt(2.0 * p.total_time()));

    double se = 0.0;
    for (size_t i = 0; i < u0.size(); ++i) {
        const double d = diffused.values()[i] - reference.values()[i];
        se += d * d;
    }
    const double rms = std::sqrt(se / static_cast<double>(u0.size()));
    CHECK(rms < 0.01 * 255.0);
}

TEST_CASE("iters_for_resolution") {
    CHECK(iters_for_resolution(12, 1.0, 2.0) == 3);
    CHECK(iters_for_resolution(12, 1.0, 1.0) == 12);
    CHECK(iters_for_resolution(3, 2.0, 1.0) == 12);
    CHECK(iters_for_resolution(1, 1.0, 1.4) == 1);                          // 0.51 -> 1
    CHECK_THROWS_AS(iters_for_resolution(1, 1.0, 2.0), ValidationError);    // 0.25 -> 0
    CHECK_THROWS_AS(iters_for_resolution(0, 1.0, 1.0), ValidationError);
}

TEST_CASE("spacing-aware stepping") {
    // dt scaled with h^2 produces the same evolution as h=1 with dt=1/7
    Raster a = oracles::random_raster(24, 24, 21);
    Raster b = a;
    b.set_spacing(2.0);
    DiffusionParams pa;
    DiffusionParams pb = DiffusionParams::for_spacing(2.0);
    const Raster ra = pm_step(a, pa);
    const Raster rb = pm_step(b, pb);
    for (size_t i = 0; i < ra.size(); ++i)
        CHECK(ra.values()[i] == doctest::Approx(rb.values()[i]).epsilon(1e-14));
}
